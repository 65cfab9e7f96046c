// Wiring: DOM events -> API calls -> reducer -> re-render.

import { ApiClient, ServiceError } from "./api.js";
import { explanationHtml, matrixHtml, panelSvg, statementsHtml } from "./render.js";
import {
  explanationView,
  functionPanels,
  initialState,
  nextState,
  relationMatrix,
  type StateAction,
  type UiSessionState,
} from "./viewmodel.js";

// API origin defaults to same-origin; override with ?api=http://host:port
const apiBase =
  typeof location !== "undefined"
    ? new URLSearchParams(location.search).get("api") ?? ""
    : "";
const api = new ApiClient(apiBase);
let state: UiSessionState = initialState();
let busy = false; // one in-flight mutation per session

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

function dispatch(action: StateAction) {
  state = nextState(state, action);
  render();
}

async function guard(work: () => Promise<void>) {
  if (busy) return;
  busy = true;
  try {
    await work();
  } catch (err) {
    if (err instanceof ServiceError) {
      dispatch({ type: "error", message: `${err.info.status}: ${err.info.detail}` });
    } else {
      dispatch({ type: "error", message: String(err) });
    }
  } finally {
    busy = false;
  }
}

async function createSession() {
  const csv = ($("csv-input") as HTMLTextAreaElement).value;
  await guard(async () => {
    const created = await api.createSession(csv);
    dispatch({
      type: "session-created",
      id: created.id,
      alternatives: created.alternatives,
      criteria: created.criteria,
    });
    await refreshRelations();
  });
}

async function refreshRelations() {
  if (!state.sessionId) return;
  const payload = await api.relations(state.sessionId);
  dispatch({ type: "relations-loaded", payload });
}

async function addStatement() {
  const line = ($("statement-input") as HTMLInputElement).value.trim();
  if (!line || !state.sessionId) return;
  await guard(async () => {
    try {
      const result = await api.addStatement(state.sessionId!, line);
      dispatch({ type: "statement-accepted", statements: result.statements });
      await refreshRelations(); // accepted statements refresh the matrices
    } catch (err) {
      if (err instanceof ServiceError && err.info.status === 409) {
        dispatch({ type: "statement-rejected", text: line, reason: err.info.detail });
        return;
      }
      throw err;
    }
  });
}

async function removeStatement(index: number) {
  if (!state.sessionId) return;
  await guard(async () => {
    const result = await api.removeStatement(state.sessionId!, index);
    dispatch({ type: "statement-removed", statements: result.statements });
    await refreshRelations();
  });
}

async function computeRepresentatives() {
  if (!state.sessionId) return;
  await guard(async () => {
    const payload = await api.representatives(state.sessionId!);
    dispatch({ type: "representatives-loaded", payload });
  });
}

async function explain(a: string, b: string) {
  if (!state.sessionId) return;
  await guard(async () => {
    try {
      const payload = await api.explanation(state.sessionId!, a, b);
      dispatch({ type: "explanation-loaded", payload });
    } catch (err) {
      if (err instanceof ServiceError && err.info.status === 409) {
        dispatch({ type: "explanation-unavailable", reason: err.info.detail });
        return;
      }
      throw err;
    }
  });
}

function render() {
  $("banner").textContent = state.banner ?? "";
  $("banner").hidden = !state.banner;
  $("session-label").textContent = state.sessionId
    ? `session ${state.sessionId.slice(0, 8)} · ${state.alternatives.length} alternatives`
    : "no session";

  $("statements-box").innerHTML = statementsHtml(state.statements);
  for (const btn of $("statements-box").querySelectorAll<HTMLButtonElement>("button.remove")) {
    btn.onclick = () => void removeStatement(Number(btn.dataset.index));
  }

  if (state.relations) {
    const view = relationMatrix(state.alternatives, state.relations);
    $("matrix-box").innerHTML = matrixHtml(view);
    for (const btn of $("matrix-box").querySelectorAll<HTMLButtonElement>("button.explain")) {
      btn.onclick = () => void explain(btn.dataset.a!, btn.dataset.b!);
      btn.oncontextmenu = (ev) => {
        ev.preventDefault(); // right click explains the opposite direction
        void explain(btn.dataset.b!, btn.dataset.a!);
      };
    }
  } else {
    $("matrix-box").innerHTML = `<p class="empty">create a session to see the relations</p>`;
  }

  if (state.representatives) {
    const reps = state.representatives;
    $("summary-box").textContent =
      `r = ${reps.sufficient.r}, t = ${reps.minimality.t}, ` +
      `epsilon* = ${reps.discriminant.epsilon_star}`;
    const panels = functionPanels(state.criteria, reps);
    $("plots-box").innerHTML = panels.map((p) => panelSvg(p)).join("");
  } else {
    $("summary-box").textContent = "";
    $("plots-box").innerHTML =
      `<p class="empty">press “compute representatives” after adding statements</p>`;
  }

  if (state.explanation) {
    $("explanation-box").innerHTML = explanationHtml(
      explanationView(state.explanation, state.criteria),
    );
  } else {
    $("explanation-box").innerHTML =
      `<p class="empty">click an I cell to ask for an explanation (right click for the opposite direction)</p>`;
  }
}

export function start() {
  $("create-session").onclick = () => void createSession();
  $("add-statement").onclick = () => void addStatement();
  $("compute-representatives").onclick = () => void computeRepresentatives();
  ($("statement-input") as HTMLInputElement).onkeydown = (ev) => {
    if (ev.key === "Enter") void addStatement();
  };
  render();
}

if (typeof document !== "undefined" && document.getElementById("create-session")) {
  start();
}
