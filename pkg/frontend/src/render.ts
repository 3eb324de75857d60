/**
 * Pure SVG rendering of a board model: a string in, a string out, so the
 * fixture tests can assert on markup without a DOM. The browser shell mounts
 * the result and wires events by element id.
 */

import { layoutBoard, Point, WIDTH } from "./layout.js";
import type { BoardModel } from "./model.js";

const HEIGHT = 430;

const ROLE_FILL: Record<string, string> = {
    red: "#c0392b",
    blue: "#2980b9",
    dep: "#e67e22",
    depstar: "#e67e22",
    universal: "#27ae60",
    backup: "#8e44ad",
};

const SIDE_FILL: Record<string, string> = { A: "#2980b9", B: "#c0392b" };

function esc(s: string): string {
    return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;");
}

export function vertexFill(model: BoardModel, id: string): string {
    const v = model.vertices.find((x) => x.id === id);
    if (!v) return "#7f8c8d";
    if (v.role) return ROLE_FILL[String(v.role[0])] ?? "#7f8c8d";
    if (v.side) return SIDE_FILL[v.side] ?? "#7f8c8d";
    return "#7f8c8d";
}

export function renderBoard(model: BoardModel,
                            positions?: Map<string, Point>): string {
    const pos = positions ?? layoutBoard(model);
    const parts: string[] = [];
    parts.push(`<svg id="board" viewBox="0 0 ${WIDTH} ${HEIGHT}" ` +
        `xmlns="http://www.w3.org/2000/svg">`);

    for (const e of model.edges) {
        const a = pos.get(e.a);
        const b = pos.get(e.b);
        if (!a || !b) continue;
        const cls = e.lastAttacked ? "edge attacked" : "edge";
        const lost = model.lostEdge &&
            ((model.lostEdge[0] === e.a && model.lostEdge[1] === e.b) ||
             (model.lostEdge[0] === e.b && model.lostEdge[1] === e.a));
        parts.push(`<line id="edge-${esc(e.a)}-${esc(e.b)}" ` +
            `class="${cls}${lost ? " lost" : ""}" ` +
            `x1="${a.x}" y1="${a.y}" x2="${b.x}" y2="${b.y}"/>`);
    }

    if (model.pendingAttack) {
        const [u, v] = model.pendingAttack;
        const a = pos.get(u);
        const b = pos.get(v);
        if (a && b) {
            parts.push(`<line class="edge pending" x1="${a.x}" y1="${a.y}" ` +
                `x2="${b.x}" y2="${b.y}"/>`);
        }
    }

    for (const v of model.vertices) {
        const p = pos.get(v.id);
        if (!p) continue;
        parts.push(`<g id="vertex-${esc(v.id)}" class="vertex">` +
            `<circle cx="${p.x}" cy="${p.y}" r="11" fill="${vertexFill(model, v.id)}"/>` +
            (v.guarded
                ? `<circle class="guard" cx="${p.x}" cy="${p.y}" r="5" fill="#f1c40f" stroke="#2c3e50"/>`
                : "") +
            `<text x="${p.x}" y="${p.y - 16}" text-anchor="middle">${esc(v.id)}</text>` +
            `</g>`);
    }
    parts.push("</svg>");
    return parts.join("");
}

export function renderStatus(model: BoardModel): string {
    const badge = model.annotation
        ? `<span id="annotation" class="badge">${esc(model.annotation)}</span>`
        : `<span id="annotation" class="badge empty"></span>`;
    const status = `<span id="status" class="status ${esc(model.status)}">` +
        `round ${model.round}, ${esc(model.status)}</span>`;
    const err = model.inlineError
        ? `<div id="inline-error" class="error">${esc(model.inlineError)}</div>`
        : "";
    const lost = model.lostEdge
        ? `<div id="lost" class="error">uncovered edge: ` +
          `${esc(model.lostEdge[0])}-${esc(model.lostEdge[1])}</div>`
        : "";
    return `${status}${badge}${err}${lost}`;
}
