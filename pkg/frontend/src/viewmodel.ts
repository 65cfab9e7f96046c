// Pure view-model derivations. Everything here is a function of service
// payloads; no numbers are computed client-side, only reshaped.

import type {
  CellCode,
  ExplanationPayload,
  FunctionPayload,
  RelationsPayload,
  RepresentativesPayload,
  StatementRecord,
} from "./types.js";

export interface MatrixCell {
  row: string;
  col: string;
  code: CellCode;
  // an incomparable cell can be explained in either direction
  explainable: boolean;
}

export interface MatrixView {
  alternatives: string[];
  cells: MatrixCell[][];
  counts: { necessary: number; strict: number; incomparable: number };
}

// One cell per ordered pair; strict subsumes necessary for display.
export function relationMatrix(
  alternatives: string[],
  payload: RelationsPayload,
): MatrixView {
  const { necessary, strict, incomparable } = payload.relations;
  const cells = alternatives.map((row, i) =>
    alternatives.map((col, j) => {
      let code: CellCode = "";
      if (strict[i][j] === "S") code = "S";
      else if (necessary[i][j] === "N") code = "N";
      else if (incomparable[i][j] === "I") code = "I";
      return { row, col, code, explainable: code === "I" };
    }),
  );
  const count = (matrix: CellCode[][], mark: CellCode) =>
    matrix.flat().filter((c) => c === mark).length;
  return {
    alternatives,
    cells,
    counts: {
      necessary: count(necessary, "N"),
      strict: count(strict, "S"),
      incomparable: count(incomparable, "I"),
    },
  };
}

export interface PlotSeries {
  label: string;
  points: [number, number][]; // verbatim from the payload
}

export interface CriterionPanel {
  criterion: string;
  series: PlotSeries[];
  xMin: number;
  xMax: number;
}

// One panel per criterion, one series per representative function.
export function functionPanels(
  criteria: string[],
  payload: RepresentativesPayload,
): CriterionPanel[] {
  return criteria.map((criterion) => {
    const series = payload.discriminant.functions.map((f: FunctionPayload) => ({
      label: f.label,
      points: f.marginals[criterion] ?? [],
    }));
    const xs = series.flatMap((s) => s.points.map(([x]) => x));
    return {
      criterion,
      series,
      xMin: xs.length ? Math.min(...xs) : 0,
      xMax: xs.length ? Math.max(...xs) : 1,
    };
  });
}

export type StatementStatus = "pending" | "accepted" | "rejected";

export interface StatementView {
  index: number | null; // server index once accepted
  text: string;
  status: StatementStatus;
  reason?: string;
}

export interface UiSessionState {
  sessionId: string | null;
  alternatives: string[];
  criteria: string[];
  statements: StatementView[];
  relations: RelationsPayload | null;
  representatives: RepresentativesPayload | null;
  explanation: ExplanationPayload | null;
  banner: string | null;
}

export function initialState(): UiSessionState {
  return {
    sessionId: null,
    alternatives: [],
    criteria: [],
    statements: [],
    relations: null,
    representatives: null,
    explanation: null,
    banner: null,
  };
}

export function statementText(kind: "strict" | "indifference", a: string, b: string): string {
  return `${a} ${kind === "strict" ? ">" : "="} ${b}`;
}

export type StateAction =
  | { type: "session-created"; id: string; alternatives: string[]; criteria: string[] }
  | { type: "statement-accepted"; statements: StatementRecord[] }
  | { type: "statement-rejected"; text: string; reason: string }
  | { type: "statement-removed"; statements: StatementRecord[] }
  | { type: "relations-loaded"; payload: RelationsPayload }
  | { type: "representatives-loaded"; payload: RepresentativesPayload }
  | { type: "explanation-loaded"; payload: ExplanationPayload }
  | { type: "explanation-unavailable"; reason: string }
  | { type: "error"; message: string };

// Single reducer so every transition is testable without a DOM. Accepted or
// removed statements invalidate downstream views; a rejection changes nothing
// but the statement list and banner.
export function nextState(state: UiSessionState, action: StateAction): UiSessionState {
  switch (action.type) {
    case "session-created":
      return {
        ...initialState(),
        sessionId: action.id,
        alternatives: action.alternatives,
        criteria: action.criteria,
      };
    case "statement-accepted":
    case "statement-removed":
      return {
        ...state,
        statements: action.statements.map((s) => ({
          index: s.index,
          text: statementText(s.kind, s.a, s.b),
          status: "accepted" as const,
        })),
        relations: null,
        representatives: null,
        explanation: null,
        banner: null,
      };
    case "statement-rejected":
      return {
        ...state,
        statements: [
          ...state.statements,
          { index: null, text: action.text, status: "rejected", reason: action.reason },
        ],
        banner: `rejected: ${action.reason}`,
      };
    case "relations-loaded":
      return { ...state, relations: action.payload, banner: null };
    case "representatives-loaded":
      return { ...state, representatives: action.payload, banner: null };
    case "explanation-loaded":
      return { ...state, explanation: action.payload, banner: null };
    case "explanation-unavailable":
      return { ...state, explanation: null, banner: action.reason };
    case "error":
      return { ...state, banner: action.message };
  }
}

export interface ExplanationView {
  title: string;
  functionLabel: string;
  margin: number;
  rows: { criterion: string; a: number; b: number; gap: number | null }[];
}

// Highlight criteria with differing marginals; numbers come straight from
// the payload.
export function explanationView(payload: ExplanationPayload, criteria: string[]): ExplanationView {
  const gaps = new Map(payload.differing.map((d) => [d.criterion, d.gap]));
  return {
    title: `why can ${payload.pair[0]} rank above ${payload.pair[1]}?`,
    functionLabel: payload.function,
    margin: payload.margin,
    rows: criteria.map((criterion) => ({
      criterion,
      a: payload.a_marginals[criterion],
      b: payload.b_marginals[criterion],
      gap: gaps.get(criterion) ?? null,
    })),
  };
}
