/**
 * Browser shell: session form, click-to-attack, click-to-compose defenses,
 * and guard-move animation. All game decisions come from the service; this
 * file only renders confirmed responses (optimistic updates are disabled).
 */

import { ApiRejectionError, EdgeIds, SessionApi } from "./api.js";
import { layoutBoard } from "./layout.js";
import { BoardModel } from "./model.js";
import { renderBoard, renderStatus } from "./render.js";

const EXAMPLES: Record<string, { graph?: string; sides?: string; rbds?: unknown;
                                 source: string; k?: number }> = {
    "K2, exact defender": {
        graph: "graph 2\ne a b", k: 1, source: "exact",
    },
    "C4, exact defender": {
        graph: "graph 4\ne a b\ne b c\ne c d\ne a d", k: 2, source: "exact",
    },
    "reduced YES instance": {
        rbds: {
            reds: ["r1", "r2"], blues: ["b1", "b2"],
            edges: [["r1", "b1"], ["r1", "b2"], ["r2", "b2"]], k: 1,
        },
        source: "reduction-nice",
    },
    "cobipartite 2+3": {
        graph: "graph 5\nv a1\nv a2\nv b1\nv b2\nv b3\n" +
            "e a1 a2\ne b1 b2\ne b1 b3\ne b2 b3\ne a1 b1\ne a2 b2\ne a2 b3\n",
        sides: "side a1 A\nside a2 A\nside b1 B\nside b2 B\nside b3 B\n",
        source: "cobipartite",
    },
};

const api = new SessionApi("");
let model: BoardModel | null = null;
let staged: EdgeIds[] = [];
let pickedGuard: string | null = null;

function $(id: string): HTMLElement {
    const el = document.getElementById(id);
    if (!el) throw new Error(`missing element #${id}`);
    return el;
}

function redraw(): void {
    if (!model) return;
    $("board-holder").innerHTML = renderBoard(model);
    $("status-holder").innerHTML = renderStatus(model);
    $("staged").textContent = staged.length
        ? "staged: " + staged.map(([a, b]) => `${a}->${b}`).join(", ")
        : "";
    wireBoard();
}

async function refresh(): Promise<void> {
    if (!model) return;
    model.applyView(await api.getState(model.sessionId));
    redraw();
}

function animateMoves(moves: EdgeIds[], done: () => void): void {
    if (!model || moves.length === 0) {
        done();
        return;
    }
    const pos = layoutBoard(model);
    const svg = document.querySelector("#board-holder svg");
    if (!svg) {
        done();
        return;
    }
    const dots = moves.map(([from, to]) => {
        const a = pos.get(from);
        const b = pos.get(to);
        if (!a || !b) return null;
        const dot = document.createElementNS("http://www.w3.org/2000/svg", "circle");
        dot.setAttribute("r", "6");
        dot.setAttribute("fill", "#f1c40f");
        dot.setAttribute("stroke", "#2c3e50");
        svg.appendChild(dot);
        return { dot, a, b };
    });
    const t0 = performance.now();
    const STEP_MS = 420;
    function frame(now: number): void {
        const t = Math.min((now - t0) / STEP_MS, 1);
        for (const d of dots) {
            if (!d) continue;
            d.dot.setAttribute("cx", String(d.a.x + (d.b.x - d.a.x) * t));
            d.dot.setAttribute("cy", String(d.a.y + (d.b.y - d.a.y) * t));
        }
        if (t < 1) {
            requestAnimationFrame(frame);
        } else {
            dots.forEach((d) => d?.dot.remove());
            done();
        }
    }
    requestAnimationFrame(frame);
}

async function onEdgeClick(a: string, b: string): Promise<void> {
    if (!model || model.status !== "live") return;
    if (model.mode !== "human-attacker") return;
    try {
        const before = model;
        const ev = await api.attack(model.sessionId, [a, b]);
        before.applyEvent(ev);
        animateMoves(ev.moves, () => void refresh());
    } catch (err) {
        if (err instanceof ApiRejectionError) {
            model.applyRejection(err.rejection);
            redraw();
            void refresh();
        } else {
            throw err;
        }
    }
}

function onVertexClick(id: string): void {
    if (!model || model.mode !== "human-defender" || model.status !== "live") {
        return;
    }
    if (pickedGuard === null) {
        pickedGuard = id;
        $("staged").textContent = `moving guard on ${id}... click a destination`;
        return;
    }
    staged.push([pickedGuard, id]);
    pickedGuard = null;
    redraw();
}

async function onSubmitDefense(): Promise<void> {
    if (!model) return;
    try {
        const ev = await api.defense(model.sessionId, staged);
        staged = [];
        model.applyEvent(ev);
        animateMoves(ev.moves, () => void refresh());
    } catch (err) {
        if (err instanceof ApiRejectionError) {
            model.applyRejection(err.rejection);
            redraw();
        } else {
            throw err;
        }
    }
}

function wireBoard(): void {
    if (!model) return;
    for (const e of model.edges) {
        const el = document.getElementById(`edge-${e.a}-${e.b}`);
        el?.addEventListener("click", () => void onEdgeClick(e.a, e.b));
    }
    for (const v of model.vertices) {
        const el = document.getElementById(`vertex-${v.id}`);
        el?.addEventListener("click", () => onVertexClick(v.id));
    }
}

async function startGame(): Promise<void> {
    const pick = ($("example") as HTMLSelectElement).value;
    const ex = EXAMPLES[pick];
    const graphText = ($("graph-text") as HTMLTextAreaElement).value.trim();
    const mode = ($("mode") as HTMLSelectElement).value;
    const body: Record<string, unknown> = { mode, seed: 0 };
    if (ex && !graphText) {
        body.defender_source = ex.source;
        if (ex.graph) body.graph = ex.graph;
        if (ex.sides) body.sides = ex.sides;
        if (ex.rbds) body.rbds = ex.rbds;
        if (ex.k !== undefined) body.k = ex.k;
    } else {
        body.defender_source = ($("source") as HTMLSelectElement).value;
        body.graph = graphText;
        const k = ($("k") as HTMLInputElement).value;
        if (k) body.k = parseInt(k, 10);
    }
    try {
        const view = await api.createSession(body as never);
        model = BoardModel.fromView(view);
        staged = [];
        $("error-banner").textContent = "";
        redraw();
    } catch (err) {
        $("error-banner").textContent = err instanceof ApiRejectionError
            ? `${err.rejection.code}: ${err.rejection.message}`
            : `service unreachable: ${String(err)}`;
    }
}

export function mount(): void {
    const sel = $("example") as HTMLSelectElement;
    for (const name of Object.keys(EXAMPLES)) {
        const opt = document.createElement("option");
        opt.value = name;
        opt.textContent = name;
        sel.appendChild(opt);
    }
    $("start").addEventListener("click", () => void startGame());
    $("submit-defense").addEventListener("click", () => void onSubmitDefense());
}

if (typeof document !== "undefined") {
    document.addEventListener("DOMContentLoaded", mount);
}
