/**
 * Annotator views: the assigned-task list, one task's working screen
 * (template and audio downloads, upload drop zone), the per-interval
 * validation error list, and the double-annotator review diff.
 */

import { escapeHtml, timeRange, verbatim } from "../render.js";
import type {
  ReviewReportDoc,
  SubmissionOutcome,
  TaskSummary,
  ValidationErrorDoc,
} from "../types.js";

export function renderTaskList(tasks: TaskSummary[]): string {
  const rows = tasks
    .map(
      (task) => `<tr data-task="${escapeHtml(task.id)}">
  <td><a href="#/tasks/${escapeHtml(task.id)}">${escapeHtml(task.file)}</a></td>
  <td>${escapeHtml(task.campaign_name)}</td>
  <td>${escapeHtml(task.kind)}${task.role ? ` (${escapeHtml(task.role)})` : ""}</td>
  <td class="state state-${escapeHtml(task.state)}">${escapeHtml(task.state)}</td>
</tr>`,
    )
    .join("\n");
  return `<section class="workspace">
<h2>Your tasks</h2>
<table class="task-list">
<thead><tr><th>file</th><th>campaign</th><th>kind</th><th>state</th></tr></thead>
<tbody>${rows || ""}</tbody>
</table>
${rows ? "" : "<p>Nothing assigned to you yet.</p>"}
</section>`;
}

const STATE_HINTS: Record<TaskSummary["state"], string> = {
  ASSIGNED: "Download the template, annotate locally, then upload your TextGrid.",
  PARALLEL: "Waiting for both annotators to pass the conformity check.",
  REVIEW: "Reconcile the two versions: download the merged file, fix the disagreements below, re-upload.",
  COMPLETED: "This task is done; the final file is read-only.",
};

export function renderTaskDetail(
  task: TaskSummary,
  templateUrl: string,
  audioUrl: string,
): string {
  const uploadZone =
    task.state === "COMPLETED"
      ? `<p class="readonly">Completed — uploads are closed.</p>`
      : `<div id="dropzone" class="dropzone">Drop your TextGrid here or <input type="file" id="file-input"></div>`;
  return `<section class="task-detail" data-state="${escapeHtml(task.state)}">
<h2>${escapeHtml(task.file)}</h2>
<p class="hint">${escapeHtml(STATE_HINTS[task.state])}</p>
<p>
  <a class="button" href="${escapeHtml(templateUrl)}" download>${task.state === "REVIEW" ? "Download merged file" : task.state === "COMPLETED" ? "Download final file" : "Download template"}</a>
  <a class="button" href="${escapeHtml(audioUrl)}" download>Download audio</a>
</p>
${uploadZone}
<div id="outcome"></div>
</section>`;
}

/** One list entry per report error, with tier, interval and time range. */
export function renderValidationErrors(errors: ValidationErrorDoc[]): string {
  if (!errors.length) return `<p class="ok">File conforms.</p>`;
  const items = errors
    .map(
      (error) => `<li class="error error-${escapeHtml(error.kind)}">
  <span class="kind">${escapeHtml(error.kind)}</span>
  ${error.tier ? `<span class="tier">tier ${escapeHtml(error.tier)}</span>` : ""}
  ${error.item_index !== null && error.item_index !== undefined ? `<span class="index">interval ${verbatim(error.item_index + 1)}</span>` : ""}
  ${error.time_range ? `<span class="range">${timeRange(error.time_range)}</span>` : ""}
  <span class="message">${escapeHtml(error.message)}</span>
</li>`,
    )
    .join("\n");
  return `<ul class="validation-errors">${items}</ul>`;
}

export function renderReviewReport(report: ReviewReportDoc): string {
  const frontier = report.frontier_conflicts
    .map(
      (conflict) => `<li class="frontier">
  tier ${escapeHtml(conflict.tier)}: yours ${timeRange(conflict.ref_range)} vs theirs ${timeRange(conflict.target_range)}
</li>`,
    )
    .join("\n");
  const content = report.content_conflicts
    .map(
      (conflict) => `<li class="content">
  tier ${escapeHtml(conflict.tier)} ${timeRange(conflict.ref_range)}: "${escapeHtml(conflict.ref_text)}" vs "${escapeHtml(conflict.target_text)}"
</li>`,
    )
    .join("\n");
  const lone = report.lone_units
    .map(
      (unit) => `<li class="lone">
  tier ${escapeHtml(unit.tier)}: only in ${escapeHtml(unit.side)} ${timeRange(unit.time_range)} "${escapeHtml(unit.text)}"
</li>`,
    )
    .join("\n");
  const sections = [
    frontier && `<h4>Frontier mismatches</h4><ul>${frontier}</ul>`,
    content && `<h4>Label conflicts</h4><ul>${content}</ul>`,
    lone && `<h4>Units on one side only</h4><ul>${lone}</ul>`,
    report.validation_errors.length
      ? `<h4>Conformity</h4>${renderValidationErrors(report.validation_errors)}`
      : "",
  ]
    .filter(Boolean)
    .join("\n");
  return sections
    ? `<div class="review-report">${sections}</div>`
    : `<p class="ok">No disagreements left.</p>`;
}

export function renderOutcome(status: number, outcome: SubmissionOutcome): string {
  const banner =
    status === 200
      ? `<p class="ok">Accepted — task is now ${escapeHtml(outcome.state)}.</p>`
      : `<p class="rejected">${escapeHtml(outcome.message ?? "rejected")}</p>`;
  const body =
    outcome.kind === "review"
      ? renderReviewReport(outcome.report as ReviewReportDoc)
      : renderValidationErrors(outcome.report as ValidationErrorDoc[]);
  return banner + body;
}
