/**
 * The application controller: resolves the current route for the session
 * role, fetches exactly the API payloads the view needs, and hands the
 * rendered HTML to the host page. DOM event wiring lives in main.ts; this
 * module stays DOM-free so the routing and rendering logic is testable
 * as plain functions.
 */

import { ApiClient } from "./api.js";
import { resolve, homeFor, type Session } from "./router.js";
import {
  renderCampaignDetail,
  renderDashboard,
  renderHistory,
  renderWizard,
  type WizardState,
} from "./views/dashboard.js";
import { renderLogin } from "./views/login.js";
import { renderTaskDetail, renderTaskList } from "./views/workspace.js";
import type { Progress } from "./types.js";

export class App {
  session: Session = { token: null, role: null };
  wizard: WizardState = {
    name: "",
    corpusId: "",
    durationTolerance: 0.1,
    tiers: [{ name: "", checking: "unchecked", categories: "", parser: "", allowEmpty: true }],
  };

  constructor(public api: ApiClient) {}

  async signIn(login: string, password: string): Promise<string> {
    const body = await this.api.login(login, password);
    this.session = { token: body.token, role: body.role };
    return homeFor(body.role);
  }

  signOut(): string {
    this.session = { token: null, role: null };
    this.api.token = null;
    return "#/login";
  }

  /** Render the view for ``hash``, or return the hash to redirect to. */
  async page(hash: string): Promise<{ html: string } | { redirect: string }> {
    const route = resolve(hash, this.session);
    if ("redirect" in route) return route;

    switch (route.view) {
      case "login":
        return { html: renderLogin() };
      case "dashboard": {
        const campaigns = await this.api.campaigns();
        const progressById: Record<string, Progress> = {};
        for (const campaign of campaigns) {
          progressById[campaign.id] = await this.api.progress(campaign.id);
        }
        return { html: renderDashboard(campaigns, progressById) };
      }
      case "campaign-new": {
        const corpora = await this.api.corpora();
        return { html: renderWizard(corpora, this.wizard) };
      }
      case "campaign-detail": {
        const campaigns = await this.api.campaigns();
        const campaign = campaigns.find((c) => c.id === route.campaignId);
        if (!campaign) return { redirect: "#/dashboard" };
        const [progress, tasks, gammaCsv] = await Promise.all([
          this.api.progress(campaign.id),
          this.api.campaignTasks(campaign.id),
          this.api.gammaCsv(campaign.id),
        ]);
        let html = renderCampaignDetail(campaign, progress, tasks, gammaCsv);
        const withSubmissions = tasks.filter((t) => (t.n_submissions ?? 0) > 0);
        for (const task of withSubmissions) {
          const history = await this.api.history(task.id);
          html += `<h4>History: ${task.id}</h4>` + renderHistory(history);
        }
        return { html };
      }
      case "workspace": {
        const tasks = await this.api.myTasks();
        return { html: renderTaskList(tasks) };
      }
      case "task-detail": {
        const task = await this.api.task(route.taskId);
        return {
          html: renderTaskDetail(
            task,
            this.api.templateUrl(task.id),
            this.api.audioUrl(task.id),
          ),
        };
      }
    }
  }
}
