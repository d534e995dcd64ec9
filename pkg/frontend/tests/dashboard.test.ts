import { describe, expect, it } from "vitest";

import {
  buildSchemePayload,
  parseCsv,
  renderCampaignDetail,
  renderDashboard,
  renderGammaTable,
  renderProgressBar,
  type WizardState,
} from "../src/views/dashboard.js";
import type { CampaignSummary, Progress } from "../src/types.js";

const PROGRESS: Progress = {
  task_states: { t1: "COMPLETED", t2: "ASSIGNED", t3: "REVIEW" },
  counts: { ASSIGNED: 1, PARALLEL: 0, REVIEW: 1, COMPLETED: 1 },
  completed: 1,
  total: 3,
  ratio: 0.3333333333333333,
  empty: false,
};

const CAMPAIGN: CampaignSummary = {
  id: "c1",
  name: "pilot",
  corpus_id: "k1",
  created_at: "2024-05-01T10:00:00+00:00",
  scheme: {
    name: "s",
    duration_tolerance: 0.1,
    tiers: [
      { name: "Speech", checking: "categorical", categories: ["Speech"], parser: null, allow_empty: true },
    ],
  },
  n_tasks: 3,
};

// Realistic CSV text as the report endpoint produces it: repr-style floats.
const GAMMA_CSV = `campaign,task,file,tier,gamma,observed_disorder,expected_disorder,n_units_a,n_units_b,n_samples,seed
pilot,t3,clip.wav,Speech,0.8553960249743871,0.25,1.7285714285714286,2,2,30,7
pilot,t4,clip.wav,Speech,0.5,1.0,2.0,1,1,30,7

tier,mean_gamma,gamma_range,n_classes
Speech,0.6776980124871936,0.35539602497438713,1
Addressee,,,2
`;

describe("progress rendering byte-matches the API payload", () => {
  it("renders ratio, completed and total verbatim", () => {
    const html = renderProgressBar(PROGRESS);
    expect(html).toContain(`data-ratio="${String(PROGRESS.ratio)}"`);
    expect(html).toContain("0.3333333333333333");
    expect(html).toContain(`${String(PROGRESS.completed)}/${String(PROGRESS.total)} completed`);
    // no recomputation: the displayed ratio is the field, not completed/total rounded
    expect(html).not.toContain("0.33%");
    expect(html).not.toContain("33.3%");
  });

  it("dashboard cards carry each campaign's own progress", () => {
    const html = renderDashboard([CAMPAIGN], { c1: PROGRESS });
    expect(html).toContain("pilot");
    expect(html).toContain('data-campaign="c1"');
    expect(html).toContain("0.3333333333333333");
    expect(html).toContain(String(CAMPAIGN.n_tasks));
  });
});

describe("gamma table byte-matches the CSV from the API", () => {
  it("renders every cell exactly as served", () => {
    const html = renderGammaTable(GAMMA_CSV);
    for (const cell of [
      "0.8553960249743871",
      "1.7285714285714286",
      "0.6776980124871936",
      "0.35539602497438713",
      "clip.wav",
      "mean_gamma",
    ]) {
      expect(html).toContain(`>${cell}</`);
    }
  });

  it("keeps task rows and the summary as two tables", () => {
    const html = renderGammaTable(GAMMA_CSV);
    expect(html).toContain('class="gamma-tasks"');
    expect(html).toContain('class="gamma-summary"');
  });

  it("cells are not parsed into numbers anywhere", () => {
    const rows = parseCsv(GAMMA_CSV);
    expect(rows[1]![4]).toBe("0.8553960249743871");
    expect(typeof rows[1]![4]).toBe("string");
  });

  it("handles quoted cells with commas", () => {
    const rows = parseCsv('campaign,task\n"name, with comma",t1\n');
    expect(rows[1]![0]).toBe("name, with comma");
  });

  it("campaign detail embeds progress, tasks and the gamma table", () => {
    const html = renderCampaignDetail(
      CAMPAIGN,
      PROGRESS,
      [
        {
          id: "t3",
          campaign_id: "c1",
          campaign_name: "pilot",
          file: "clip.wav",
          duration: 60,
          kind: "double",
          state: "REVIEW",
          n_submissions: 2,
        },
      ],
      GAMMA_CSV,
    );
    expect(html).toContain('data-task="t3"');
    expect(html).toContain('class="state">REVIEW');
    expect(html).toContain("0.8553960249743871");
    expect(html).toContain("0.3333333333333333");
  });
});

describe("campaign wizard", () => {
  it("round-trips a scheme config the create endpoint accepts", () => {
    const state: WizardState = {
      name: "addressee",
      corpusId: "k1",
      durationTolerance: 0.1,
      tiers: [
        { name: "Speech", checking: "categorical", categories: "Speech", parser: "", allowEmpty: true },
        { name: "Addressee", checking: "categorical", categories: "ADS, CDS", parser: "", allowEmpty: true },
        { name: "phones", checking: "parsed", categories: "", parser: "french-sampa", allowEmpty: false },
        { name: "notes", checking: "unchecked", categories: "ignored", parser: "", allowEmpty: true },
      ],
    };
    expect(buildSchemePayload(state)).toEqual({
      name: "addressee",
      duration_tolerance: 0.1,
      tiers: [
        { name: "Speech", checking: "categorical", categories: ["Speech"], parser: null, allow_empty: true },
        { name: "Addressee", checking: "categorical", categories: ["ADS", "CDS"], parser: null, allow_empty: true },
        { name: "phones", checking: "parsed", categories: [], parser: "french-sampa", allow_empty: false },
        { name: "notes", checking: "unchecked", categories: [], parser: null, allow_empty: true },
      ],
    });
  });
});
