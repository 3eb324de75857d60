/**
 * Client-side mirror of a session. The model never decides legality; it only
 * reflects server responses. Mutations happen through applyView (authoritative
 * snapshot), applyEvent (an accepted attack/defense), and applyRejection
 * (an inline error that leaves the game state untouched).
 */

import type { EdgeIds, GameEvent, Rejection, SessionView } from "./api.js";

export interface BoardVertex {
    id: string;
    guarded: boolean;
    role: (string | number)[] | null;
    side: "A" | "B" | null;
}

export interface BoardEdge {
    a: string;
    b: string;
    lastAttacked: boolean;
}

const REJECTION_TEXT: Record<string, string> = {
    "no-crossing": "Rejected: no guard traverses the attacked edge.",
    "not-a-bijection": "Rejected: the moves do not form a one-to-one guard assignment.",
    "neighborhood-violation": "Rejected: a guard can only stay or step to a neighboring vertex.",
};

function edgeKey(a: string, b: string): string {
    return a < b ? `${a}|${b}` : `${b}|${a}`;
}

export class BoardModel {
    readonly sessionId: string;
    readonly mode: string;
    readonly defenderSource: string;
    readonly k: number;
    vertices: BoardVertex[];
    edges: BoardEdge[];
    round: number;
    status: string;
    annotation: string;
    pendingAttack: EdgeIds | null;
    lostEdge: EdgeIds | null;
    inlineError: string | null = null;
    lastMoves: EdgeIds[] = [];

    private constructor(view: SessionView) {
        this.sessionId = view.id;
        this.mode = view.mode;
        this.defenderSource = view.defender_source;
        this.k = view.k;
        this.vertices = view.vertices.map((id) => ({
            id,
            guarded: view.config.includes(id),
            role: view.roles ? view.roles[id] ?? null : null,
            side: view.sides ? view.sides[id] ?? null : null,
        }));
        this.edges = view.edges.map(([a, b]) => ({ a, b, lastAttacked: false }));
        this.round = view.round;
        this.status = view.status;
        this.annotation = view.annotation;
        this.pendingAttack = view.pending_attack;
        this.lostEdge = view.lost_edge;
    }

    static fromView(view: SessionView): BoardModel {
        return new BoardModel(view);
    }

    /** Authoritative resync from GET /sessions/{id}. */
    applyView(view: SessionView): void {
        const guarded = new Set(view.config);
        for (const v of this.vertices) {
            v.guarded = guarded.has(v.id);
        }
        this.round = view.round;
        this.status = view.status;
        this.annotation = view.annotation;
        this.pendingAttack = view.pending_attack;
        this.lostEdge = view.lost_edge;
    }

    /** Accepted attack or defense; highlights the attacked edge. */
    applyEvent(ev: GameEvent): void {
        const guarded = new Set(ev.config);
        for (const v of this.vertices) {
            v.guarded = guarded.has(v.id);
        }
        const key = edgeKey(ev.attacked[0], ev.attacked[1]);
        for (const e of this.edges) {
            e.lastAttacked = edgeKey(e.a, e.b) === key;
        }
        this.round = ev.round;
        this.status = ev.status;
        this.annotation = ev.annotation;
        this.lastMoves = ev.moves;
        this.inlineError = null;
        if (this.status !== "live") {
            this.pendingAttack = null;
        }
    }

    /** Rejected request: surface the reason, leave the board untouched. */
    applyRejection(rej: Rejection): void {
        const base = REJECTION_TEXT[rej.code] ?? `Rejected: ${rej.message}`;
        this.inlineError = rej.detail && !(rej.code in REJECTION_TEXT)
            ? base
            : `${base} (${rej.message})`;
    }

    guardedIds(): string[] {
        return this.vertices.filter((v) => v.guarded).map((v) => v.id).sort();
    }

    /** Comparable projection of everything the server also reports. */
    snapshot(): Record<string, unknown> {
        return {
            config: this.guardedIds(),
            round: this.round,
            status: this.status,
            annotation: this.annotation,
            lost_edge: this.lostEdge ? [...this.lostEdge] : null,
        };
    }
}

export function rejectionText(code: string): string | undefined {
    return REJECTION_TEXT[code];
}
