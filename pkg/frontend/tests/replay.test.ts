// Session replay of the worked example against recorded service payloads
// (fixtures/ holds verbatim responses of the live service), plus an optional
// live round-trip when ROREP_SERVICE_URL points at a running service.

import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { explanationHtml, matrixHtml, panelSvg } from "../dist/render.js";
import {
  explanationView,
  functionPanels,
  relationMatrix,
} from "../dist/viewmodel.js";
import type {
  ExplanationPayload,
  RelationsPayload,
  RepresentativesPayload,
  SessionPayload,
} from "../dist/types.js";

const fixture = <T>(name: string): T =>
  JSON.parse(readFileSync(join(__dirname, "..", "fixtures", name), "utf-8")) as T;

const session = fixture<SessionPayload>("session.json");
const relations = fixture<RelationsPayload>("relations.json");
const representatives = fixture<RepresentativesPayload>("representatives.json");
const explanation = fixture<ExplanationPayload>("explanation_a4_a8.json");

describe("worked-example replay (recorded payloads)", () => {
  it("matrix view shows 46 incomparable cells on a 10x10 grid", () => {
    const view = relationMatrix(session.alternatives, relations);
    expect(view.cells).toHaveLength(10);
    expect(view.counts.incomparable).toBe(46);
    const iCells = view.cells.flat().filter((c) => c.code === "I");
    expect(iCells).toHaveLength(46);
    for (const cell of iCells) expect(cell.explainable).toBe(true);
    // every I cell appears with its mirror
    const keys = new Set(iCells.map((c) => `${c.row}|${c.col}`));
    for (const cell of iCells) expect(keys.has(`${cell.col}|${cell.row}`)).toBe(true);
  });

  it("function view shows one series per representative function in every panel", () => {
    const t = representatives.minimality.t;
    const panels = functionPanels(session.criteria, representatives);
    expect(panels).toHaveLength(5);
    for (const panel of panels) {
      expect(panel.series).toHaveLength(t);
      // series values match the service payload exactly: no client math
      for (const [k, series] of panel.series.entries()) {
        expect(series.points).toEqual(
          representatives.discriminant.functions[k].marginals[panel.criterion],
        );
      }
    }
  });

  it("explanation for (a4, a8) lists differing criteria with payload numbers", () => {
    expect(explanation.pair).toEqual(["a4", "a8"]);
    expect(explanation.differing.length).toBeGreaterThan(0);
    const view = explanationView(explanation, session.criteria);
    for (const row of view.rows) {
      expect(row.a).toBe(explanation.a_marginals[row.criterion]);
      expect(row.b).toBe(explanation.b_marginals[row.criterion]);
      if (row.gap !== null) {
        const fromPayload = explanation.differing.find((d) => d.criterion === row.criterion);
        expect(row.gap).toBe(fromPayload?.gap);
      }
    }
    expect(view.margin).toBe(explanation.margin);
  });

  it("rendered markup carries the payload numbers verbatim", () => {
    const html = explanationHtml(explanationView(explanation, session.criteria));
    for (const d of explanation.differing) expect(html).toContain(String(d.gap));
    expect(html).toContain(String(explanation.margin));

    const panels = functionPanels(session.criteria, representatives);
    const svg = panelSvg(panels[2]);
    for (const [x, u] of panels[2].series[0].points) {
      expect(svg).toContain(`u(${x}) = ${u}`);
    }

    const matrix = matrixHtml(relationMatrix(session.alternatives, relations));
    expect(matrix.match(/class="explain"/g)).toHaveLength(46);
  });
});

const serviceUrl = process.env.ROREP_SERVICE_URL;

describe.skipIf(!serviceUrl)("worked-example replay (live service)", () => {
  it("upload, three statements, compute, explain", async () => {
    const csv = readFileSync(join(__dirname, "..", "..", "data", "democracy.csv"), "utf-8");
    const post = async (path: string, body?: unknown) => {
      const resp = await fetch(`${serviceUrl}${path}`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
      return { status: resp.status, body: await resp.json() };
    };
    const created = await post("/api/sessions", { csv });
    expect(created.status).toBe(201);
    const sid = created.body.id as string;
    for (const line of ["a4 > a5", "a8 > a10", "a7 > a6"]) {
      expect((await post(`/api/sessions/${sid}/preferences`, { line })).status).toBe(200);
    }
    const rel = await fetch(`${serviceUrl}/api/sessions/${sid}/relations`);
    const relBody = (await rel.json()) as RelationsPayload;
    expect(relationMatrix(created.body.alternatives, relBody).counts.incomparable).toBe(46);

    const reps = await post(`/api/sessions/${sid}/representatives`);
    const panels = functionPanels(created.body.criteria, reps.body as RepresentativesPayload);
    for (const panel of panels) {
      expect(panel.series).toHaveLength((reps.body as RepresentativesPayload).minimality.t);
    }

    const expl = await fetch(`${serviceUrl}/api/sessions/${sid}/explanations?a=a4&b=a8`);
    expect(expl.status).toBe(200);
    const explBody = (await expl.json()) as ExplanationPayload;
    expect(explBody.differing.length).toBeGreaterThan(0);
  }, 120_000);
});
