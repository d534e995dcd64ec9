/**
 * Campaign-manager views: campaign cards with progress bars, the
 * campaign-creation wizard, per-campaign drill-down with task states,
 * submission history and agreement values, and the CSV download.
 *
 * Rendering is value-verbatim: numbers and names pass through unchanged
 * from the API payloads (progress ratios are not recomputed from counts,
 * agreement cells come straight out of the CSV text).
 */

import { escapeHtml, timeRange, verbatim } from "../render.js";
import type {
  CampaignSummary,
  CorpusSummary,
  HistoryEntry,
  Progress,
  SchemeDoc,
  TaskSummary,
  TierSpecDoc,
} from "../types.js";

export function renderDashboard(
  campaigns: CampaignSummary[],
  progressById: Record<string, Progress>,
): string {
  const cards = campaigns
    .map((campaign) => {
      const progress = progressById[campaign.id];
      return `<article class="campaign-card" data-campaign="${escapeHtml(campaign.id)}">
  <h3><a href="#/campaigns/${escapeHtml(campaign.id)}">${escapeHtml(campaign.name)}</a></h3>
  <p>${verbatim(campaign.n_tasks)} task(s), created ${verbatim(campaign.created_at)}</p>
  ${progress ? renderProgressBar(progress) : ""}
</article>`;
    })
    .join("\n");
  return `<section class="dashboard">
<h2>Campaigns</h2>
<p><a href="#/campaigns/new" class="button">New campaign</a></p>
${cards || "<p>No campaigns yet.</p>"}
</section>`;
}

export function renderProgressBar(progress: Progress): string {
  const percent = progress.ratio * 100;
  return `<div class="progress" role="progressbar" data-ratio="${verbatim(progress.ratio)}">
  <div class="progress-fill" style="width:${verbatim(percent)}%"></div>
  <span class="progress-text">${verbatim(progress.completed)}/${verbatim(progress.total)} completed (ratio ${verbatim(progress.ratio)})</span>
</div>`;
}

export interface WizardTierState {
  name: string;
  checking: "unchecked" | "categorical" | "parsed";
  categories: string; // comma-separated, as typed in the form
  parser: string;
  allowEmpty: boolean;
}

export interface WizardState {
  name: string;
  corpusId: string;
  durationTolerance: number;
  tiers: WizardTierState[];
}

/** The exact scheme document POST /campaigns accepts, from wizard state. */
export function buildSchemePayload(state: WizardState): SchemeDoc {
  const tiers: TierSpecDoc[] = state.tiers.map((tier) => ({
    name: tier.name,
    checking: tier.checking,
    categories:
      tier.checking === "categorical"
        ? tier.categories.split(",").map((c) => c.trim()).filter(Boolean)
        : [],
    parser: tier.checking === "parsed" ? tier.parser : null,
    allow_empty: tier.allowEmpty,
  }));
  return { name: state.name, duration_tolerance: state.durationTolerance, tiers };
}

export function renderWizard(corpora: CorpusSummary[], state: WizardState): string {
  const corpusOptions = corpora
    .map(
      (corpus) =>
        `<option value="${escapeHtml(corpus.id)}"${corpus.id === state.corpusId ? " selected" : ""}>${escapeHtml(corpus.id)} (${verbatim(corpus.files.length)} files, ${escapeHtml(corpus.source)})</option>`,
    )
    .join("");
  const tierRows = state.tiers
    .map(
      (tier, index) => `<fieldset class="tier-row" data-index="${index}">
  <input name="tier-name" value="${escapeHtml(tier.name)}" placeholder="tier name">
  <select name="tier-checking">
    ${(["unchecked", "categorical", "parsed"] as const)
      .map(
        (mode) =>
          `<option value="${mode}"${tier.checking === mode ? " selected" : ""}>${mode}</option>`,
      )
      .join("")}
  </select>
  <input name="tier-categories" value="${escapeHtml(tier.categories)}" placeholder="categories, comma-separated"${tier.checking === "categorical" ? "" : " disabled"}>
  <input name="tier-parser" value="${escapeHtml(tier.parser)}" placeholder="parser id"${tier.checking === "parsed" ? "" : " disabled"}>
  <label><input type="checkbox" name="tier-allow-empty"${tier.allowEmpty ? " checked" : ""}> allow empty</label>
</fieldset>`,
    )
    .join("\n");
  return `<section class="wizard">
<h2>New campaign</h2>
<form id="campaign-form">
  <label>Name <input name="name" value="${escapeHtml(state.name)}"></label>
  <label>Corpus <select name="corpus">${corpusOptions}</select></label>
  <label>Duration tolerance (s) <input name="tolerance" type="number" step="0.01" value="${verbatim(state.durationTolerance)}"></label>
  <h3>Tiers</h3>
  ${tierRows}
  <button type="button" id="add-tier">Add tier</button>
  <button type="submit">Create</button>
</form>
</section>`;
}

export function renderCampaignDetail(
  campaign: CampaignSummary,
  progress: Progress,
  tasks: TaskSummary[],
  gammaCsv: string,
): string {
  const rows = tasks
    .map(
      (task) => `<tr data-task="${escapeHtml(task.id)}">
  <td>${escapeHtml(task.id)}</td>
  <td>${escapeHtml(task.file)}</td>
  <td>${escapeHtml(task.kind)}</td>
  <td class="state">${escapeHtml(task.state)}</td>
  <td>${verbatim(task.n_submissions ?? 0)}</td>
</tr>`,
    )
    .join("\n");
  return `<section class="campaign-detail">
<h2>${escapeHtml(campaign.name)}</h2>
${renderProgressBar(progress)}
<p><a class="button" id="download-gamma" href="#" download="gamma.csv">Download agreement CSV</a></p>
<table class="tasks">
<thead><tr><th>task</th><th>file</th><th>kind</th><th>state</th><th>submissions</th></tr></thead>
<tbody>${rows}</tbody>
</table>
<h3>Agreement</h3>
${renderGammaTable(gammaCsv)}
</section>`;
}

/** Minimal CSV splitting (quoted cells supported); cells stay strings. */
export function parseCsv(text: string): string[][] {
  const rows: string[][] = [];
  for (const line of text.split("\n")) {
    if (line === "") {
      rows.push([]);
      continue;
    }
    const cells: string[] = [];
    let cell = "";
    let quoted = false;
    for (let i = 0; i < line.length; i++) {
      const ch = line[i];
      if (quoted) {
        if (ch === '"' && line[i + 1] === '"') {
          cell += '"';
          i++;
        } else if (ch === '"') {
          quoted = false;
        } else {
          cell += ch;
        }
      } else if (ch === '"') {
        quoted = true;
      } else if (ch === ",") {
        cells.push(cell);
        cell = "";
      } else {
        cell += ch;
      }
    }
    cells.push(cell);
    rows.push(cells);
  }
  while (rows.length && rows[rows.length - 1]!.length === 0) rows.pop();
  return rows;
}

/**
 * The agreement tables: per-task rows and the per-tier summary, rendered
 * cell-for-cell from the CSV text the server produced.
 */
export function renderGammaTable(csvText: string): string {
  const rows = parseCsv(csvText);
  if (!rows.length) return "<p>No agreement data.</p>";
  const blank = rows.findIndex((row) => row.length === 0);
  const taskRows = blank === -1 ? rows : rows.slice(0, blank);
  const summaryRows = blank === -1 ? [] : rows.slice(blank + 1);

  const table = (data: string[][], css: string) => {
    if (!data.length) return "";
    const [header, ...body] = data;
    return `<table class="${css}">
<thead><tr>${header!.map((cell) => `<th>${escapeHtml(cell)}</th>`).join("")}</tr></thead>
<tbody>${body
      .map((row) => `<tr>${row.map((cell) => `<td>${escapeHtml(cell)}</td>`).join("")}</tr>`)
      .join("\n")}</tbody>
</table>`;
  };
  return `${table(taskRows, "gamma-tasks")}\n${table(summaryRows, "gamma-summary")}`;
}

export function renderHistory(entries: HistoryEntry[]): string {
  const rows = entries
    .map((entry) => {
      const summary =
        entry.report.kind === "validation"
          ? `${entry.report.errors.length} error(s)`
          : "review report";
      return `<tr>
  <td>${escapeHtml(entry.who)}</td>
  <td>${verbatim(entry.when)}</td>
  <td><a href="#" data-blob="${escapeHtml(entry.blob_id)}">file</a></td>
  <td>${escapeHtml(summary)}</td>
</tr>`;
    })
    .join("\n");
  return `<table class="history">
<thead><tr><th>who</th><th>when</th><th>file</th><th>report</th></tr></thead>
<tbody>${rows}</tbody>
</table>`;
}

export { timeRange };
