/**
 * Board layouts. Reduced instances follow the gadget's customary picture:
 * red originals on top, blue partners below them, each blue's dependents
 * fanned underneath, the universal/backup pair on the right. Two-clique
 * instances use one row per side; anything else falls back to a two-coloring
 * (a pure drawing aid, not a game rule) or a circle.
 */

import type { BoardModel } from "./model.js";

export interface Point {
    x: number;
    y: number;
}

export const WIDTH = 900;
export const RED_Y = 80;
export const BLUE_Y = 230;
export const DEP_Y = 360;
export const ROW_TOP_Y = 100;
export const ROW_BOTTOM_Y = 300;
export const SIDE_X = WIDTH - 80;

function spread(count: number, width: number, offset = 0): number[] {
    const step = width / (count + 1);
    return Array.from({ length: count }, (_, i) => offset + step * (i + 1));
}

function layoutReduced(model: BoardModel): Map<string, Point> {
    const pos = new Map<string, Point>();
    const reds: string[] = [];
    const blues: string[] = [];
    const deps = new Map<string, string[]>();
    const depstars: string[] = [];
    for (const v of model.vertices) {
        const role = v.role ?? [];
        switch (role[0]) {
            case "red":
                reds.push(v.id);
                break;
            case "blue":
                blues.push(v.id);
                break;
            case "dep": {
                const owner = `u${role[1]}`;
                (deps.get(owner) ?? deps.set(owner, []).get(owner)!).push(v.id);
                break;
            }
            case "depstar":
                depstars.push(v.id);
                break;
            case "universal":
                pos.set(v.id, { x: SIDE_X, y: BLUE_Y });
                break;
            case "backup":
                pos.set(v.id, { x: SIDE_X, y: RED_Y });
                break;
        }
    }
    const inner = WIDTH - 200;
    spread(reds.length, inner).forEach((x, i) => pos.set(reds[i]!, { x, y: RED_Y }));
    const blueXs = spread(blues.length, inner);
    blueXs.forEach((x, i) => pos.set(blues[i]!, { x, y: BLUE_Y }));
    blues.forEach((blue, i) => {
        const fan = deps.get(blue) ?? [];
        const cx = blueXs[i]!;
        fan.forEach((dep, j) => {
            pos.set(dep, { x: cx + (j - (fan.length - 1) / 2) * 16, y: DEP_Y });
        });
    });
    depstars.forEach((dep, j) => {
        pos.set(dep, {
            x: SIDE_X + (j - (depstars.length - 1) / 2) * 16,
            y: DEP_Y,
        });
    });
    return pos;
}

function layoutTwoRows(top: string[], bottom: string[]): Map<string, Point> {
    const pos = new Map<string, Point>();
    spread(top.length, WIDTH).forEach((x, i) =>
        pos.set(top[i]!, { x, y: ROW_TOP_Y }));
    spread(bottom.length, WIDTH).forEach((x, i) =>
        pos.set(bottom[i]!, { x, y: ROW_BOTTOM_Y }));
    return pos;
}

function twoColor(model: BoardModel): [string[], string[]] | null {
    const color = new Map<string, 0 | 1>();
    const adj = new Map<string, string[]>();
    for (const v of model.vertices) {
        adj.set(v.id, []);
    }
    for (const e of model.edges) {
        adj.get(e.a)!.push(e.b);
        adj.get(e.b)!.push(e.a);
    }
    for (const v of model.vertices) {
        if (color.has(v.id)) continue;
        color.set(v.id, 0);
        const queue = [v.id];
        while (queue.length) {
            const u = queue.pop()!;
            for (const w of adj.get(u)!) {
                if (!color.has(w)) {
                    color.set(w, color.get(u) === 0 ? 1 : 0);
                    queue.push(w);
                } else if (color.get(w) === color.get(u)) {
                    return null;
                }
            }
        }
    }
    const left = model.vertices.filter((v) => color.get(v.id) === 0).map((v) => v.id);
    const right = model.vertices.filter((v) => color.get(v.id) === 1).map((v) => v.id);
    return [left, right];
}

function layoutCircle(model: BoardModel): Map<string, Point> {
    const pos = new Map<string, Point>();
    const n = model.vertices.length;
    const cx = WIDTH / 2;
    const cy = (ROW_TOP_Y + ROW_BOTTOM_Y) / 2;
    const r = 140;
    model.vertices.forEach((v, i) => {
        const angle = (2 * Math.PI * i) / Math.max(n, 1) - Math.PI / 2;
        pos.set(v.id, { x: cx + r * Math.cos(angle), y: cy + r * Math.sin(angle) });
    });
    return pos;
}

export function layoutBoard(model: BoardModel): Map<string, Point> {
    if (model.vertices.some((v) => v.role !== null)) {
        return layoutReduced(model);
    }
    if (model.vertices.some((v) => v.side !== null)) {
        const a = model.vertices.filter((v) => v.side === "A").map((v) => v.id);
        const b = model.vertices.filter((v) => v.side === "B").map((v) => v.id);
        return layoutTwoRows(a, b);
    }
    const coloring = twoColor(model);
    if (coloring) {
        return layoutTwoRows(coloring[0], coloring[1]);
    }
    return layoutCircle(model);
}
