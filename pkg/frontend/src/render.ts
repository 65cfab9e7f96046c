// DOM/SVG rendering of the view-models. String builders are kept pure so the
// markup can be asserted in tests without a browser.

import type {
  CriterionPanel,
  ExplanationView,
  MatrixView,
  StatementView,
} from "./viewmodel.js";

const CODE_CLASS: Record<string, string> = {
  N: "cell-necessary",
  S: "cell-strict",
  I: "cell-incomparable",
  "": "cell-blank",
};

export function matrixHtml(view: MatrixView): string {
  const head = view.alternatives.map((a) => `<th>${a}</th>`).join("");
  const rows = view.cells
    .map((row, i) => {
      const cells = row
        .map((cell) => {
          const cls = CODE_CLASS[cell.code];
          if (cell.explainable) {
            return (
              `<td class="${cls}" data-row="${cell.row}" data-col="${cell.col}">` +
              `<button class="explain" data-a="${cell.row}" data-b="${cell.col}" ` +
              `title="explain ${cell.row} over ${cell.col}">I</button></td>`
            );
          }
          return `<td class="${cls}">${cell.code}</td>`;
        })
        .join("");
      return `<tr><th>${view.alternatives[i]}</th>${cells}</tr>`;
    })
    .join("");
  return (
    `<table class="relation-matrix"><thead><tr><th></th>${head}</tr></thead>` +
    `<tbody>${rows}</tbody></table>` +
    `<p class="matrix-counts">necessary ${view.counts.necessary} · ` +
    `strict ${view.counts.strict} · incomparable ${view.counts.incomparable}</p>`
  );
}

const SERIES_COLORS = ["#2563eb", "#dc2626", "#16a34a", "#9333ea", "#ea580c"];

// Step plot per function: marginal values are only defined at characteristic
// points; the connecting steps are display interpolation, not data.
export function panelSvg(panel: CriterionPanel, width = 260, height = 180): string {
  const pad = 28;
  const span = panel.xMax - panel.xMin || 1;
  const sx = (x: number) => pad + ((x - panel.xMin) / span) * (width - 2 * pad);
  const sy = (u: number) => height - pad - u * (height - 2 * pad);

  const parts: string[] = [];
  parts.push(
    `<line x1="${pad}" y1="${sy(0)}" x2="${width - pad}" y2="${sy(0)}" class="axis"/>`,
    `<line x1="${pad}" y1="${sy(0)}" x2="${pad}" y2="${sy(1)}" class="axis"/>`,
  );
  panel.series.forEach((series, k) => {
    const color = SERIES_COLORS[k % SERIES_COLORS.length];
    if (!series.points.length) return;
    const path = series.points
      .map(([x, u], i) => {
        const px = sx(x).toFixed(1);
        const py = sy(u).toFixed(1);
        if (i === 0) return `M ${px} ${py}`;
        const prev = sy(series.points[i - 1][1]).toFixed(1);
        return `L ${px} ${prev} L ${px} ${py}`;
      })
      .join(" ");
    parts.push(`<path d="${path}" fill="none" stroke="${color}" class="series"/>`);
    for (const [x, u] of series.points) {
      parts.push(
        `<circle cx="${sx(x).toFixed(1)}" cy="${sy(u).toFixed(1)}" r="2.5" ` +
        `fill="${color}"><title>${series.label}: u(${x}) = ${u}</title></circle>`,
      );
    }
  });
  const legend = panel.series
    .map(
      (s, k) =>
        `<tspan fill="${SERIES_COLORS[k % SERIES_COLORS.length]}">${s.label}</tspan>`,
    )
    .join(" ");
  parts.push(`<text x="${pad}" y="14" class="legend">${panel.criterion}: ${legend}</text>`);
  return `<svg viewBox="0 0 ${width} ${height}" class="panel">${parts.join("")}</svg>`;
}

export function statementsHtml(statements: StatementView[]): string {
  if (!statements.length) return `<p class="empty">no statements yet</p>`;
  const items = statements
    .map((s) => {
      const badge = `<span class="badge badge-${s.status}">${s.status}</span>`;
      const remove =
        s.status === "accepted" && s.index !== null
          ? `<button class="remove" data-index="${s.index}">remove</button>`
          : "";
      const reason = s.reason ? `<span class="reason">${s.reason}</span>` : "";
      return `<li>${s.text} ${badge} ${remove} ${reason}</li>`;
    })
    .join("");
  return `<ul class="statements">${items}</ul>`;
}

export function explanationHtml(view: ExplanationView): string {
  const rows = view.rows
    .map((r) => {
      const cls = r.gap !== null ? ' class="differing"' : "";
      const gap = r.gap !== null ? r.gap : "";
      return `<tr${cls}><td>${r.criterion}</td><td>${r.a}</td><td>${r.b}</td><td>${gap}</td></tr>`;
    })
    .join("");
  return (
    `<h3>${view.title}</h3>` +
    `<p>function <strong>${view.functionLabel}</strong>, margin ${view.margin}</p>` +
    `<table class="explanation"><thead><tr><th>criterion</th><th>marginal a</th>` +
    `<th>marginal b</th><th>gap</th></tr></thead><tbody>${rows}</tbody></table>`
  );
}
