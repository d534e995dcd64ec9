/** Browser entry point: bind the controller to the DOM and the hash. */

import { ApiClient } from "./api.js";
import { App } from "./app.js";
import { buildSchemePayload } from "./views/dashboard.js";
import { renderLogin } from "./views/login.js";
import { renderOutcome } from "./views/workspace.js";
import type { SubmissionOutcome } from "./types.js";

const BASE_URL = (window as { SESHAT_API?: string }).SESHAT_API ?? "";
const api = new ApiClient(BASE_URL);
const app = new App(api);
const root = document.getElementById("app")!;

async function show(hash: string): Promise<void> {
  const page = await app.page(hash);
  if ("redirect" in page) {
    window.location.hash = page.redirect;
    return;
  }
  root.innerHTML = page.html;
  bind();
}

function bind(): void {
  const loginForm = document.getElementById("login-form") as HTMLFormElement | null;
  if (loginForm) {
    loginForm.addEventListener("submit", async (event) => {
      event.preventDefault();
      const data = new FormData(loginForm);
      try {
        window.location.hash = await app.signIn(
          String(data.get("login") ?? ""),
          String(data.get("password") ?? ""),
        );
      } catch {
        root.innerHTML = renderLogin("unknown login or wrong password");
        bind();
      }
    });
  }

  const campaignForm = document.getElementById("campaign-form") as HTMLFormElement | null;
  if (campaignForm) {
    campaignForm.addEventListener("submit", async (event) => {
      event.preventDefault();
      syncWizardFromForm(campaignForm);
      const created = await api.createCampaign(
        app.wizard.name,
        app.wizard.corpusId,
        buildSchemePayload(app.wizard),
      );
      window.location.hash = `#/campaigns/${created.id}`;
    });
    document.getElementById("add-tier")?.addEventListener("click", () => {
      syncWizardFromForm(campaignForm);
      app.wizard.tiers.push({
        name: "",
        checking: "unchecked",
        categories: "",
        parser: "",
        allowEmpty: true,
      });
      void show(window.location.hash);
    });
  }

  const fileInput = document.getElementById("file-input") as HTMLInputElement | null;
  if (fileInput) {
    fileInput.addEventListener("change", async () => {
      const file = fileInput.files?.[0];
      if (!file) return;
      const taskId = window.location.hash.split("/")[2]!;
      const { status, outcome } = await api.submit(taskId, file.name, file);
      document.getElementById("outcome")!.innerHTML = renderOutcome(
        status,
        outcome as SubmissionOutcome,
      );
      if (status === 200) setTimeout(() => void show(window.location.hash), 1500);
    });
  }

  const download = document.getElementById("download-gamma");
  if (download) {
    download.addEventListener("click", async (event) => {
      event.preventDefault();
      const campaignId = window.location.hash.split("/")[2]!;
      const csv = await api.gammaCsv(campaignId);
      const url = URL.createObjectURL(new Blob([csv], { type: "text/csv" }));
      const anchor = document.createElement("a");
      anchor.href = url;
      anchor.download = "gamma.csv";
      anchor.click();
      URL.revokeObjectURL(url);
    });
  }
}

function syncWizardFromForm(form: HTMLFormElement): void {
  const data = new FormData(form);
  app.wizard.name = String(data.get("name") ?? "");
  app.wizard.corpusId = String(data.get("corpus") ?? "");
  app.wizard.durationTolerance = Number(data.get("tolerance") ?? 0.1);
  const rows = form.querySelectorAll<HTMLFieldSetElement>(".tier-row");
  app.wizard.tiers = Array.from(rows).map((row) => ({
    name: (row.querySelector('[name="tier-name"]') as HTMLInputElement).value,
    checking: (row.querySelector('[name="tier-checking"]') as HTMLSelectElement)
      .value as "unchecked" | "categorical" | "parsed",
    categories: (row.querySelector('[name="tier-categories"]') as HTMLInputElement).value,
    parser: (row.querySelector('[name="tier-parser"]') as HTMLInputElement).value,
    allowEmpty: (row.querySelector('[name="tier-allow-empty"]') as HTMLInputElement).checked,
  }));
}

window.addEventListener("hashchange", () => void show(window.location.hash));
void show(window.location.hash || "#/login");
