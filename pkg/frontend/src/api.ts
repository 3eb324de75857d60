/**
 * Typed client for the session service. Every mutation returns the server's
 * event; the caller is expected to refetch state afterwards, because the UI
 * never computes game rules locally.
 */

export type EdgeIds = [string, string];

export interface SessionView {
    id: string;
    mode: "human-attacker" | "human-defender";
    defender_source: string;
    k: number;
    round: number;
    status: "live" | "defender-lost" | "closed";
    vertices: string[];
    edges: EdgeIds[];
    config: string[];
    annotation: string;
    pending_attack: EdgeIds | null;
    roles: Record<string, (string | number)[]> | null;
    sides: Record<string, "A" | "B"> | null;
    lost_edge: EdgeIds | null;
}

export interface GameEvent {
    round: number;
    attacked: EdgeIds;
    moves: EdgeIds[];
    config: string[];
    annotation: string;
    status: string;
    detail?: string;
}

export interface Rejection {
    code: string;
    message: string;
    detail?: string;
}

export interface CreateSessionBody {
    mode: string;
    defender_source: string;
    graph?: string;
    k?: number;
    seed?: number;
    sides?: string;
    rbds?: unknown;
    variant?: string;
}

export class ApiRejectionError extends Error {
    constructor(public rejection: Rejection, public status: number) {
        super(rejection.message);
    }
}

async function parseOrThrow<T>(resp: Response): Promise<T> {
    const body = await resp.json();
    if (!resp.ok) {
        throw new ApiRejectionError(body as Rejection, resp.status);
    }
    return body as T;
}

export class SessionApi {
    constructor(private base: string = "") {}

    async createSession(body: CreateSessionBody): Promise<SessionView> {
        const resp = await fetch(`${this.base}/sessions`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(body),
        });
        return parseOrThrow<SessionView>(resp);
    }

    async getState(id: string): Promise<SessionView> {
        return parseOrThrow<SessionView>(await fetch(`${this.base}/sessions/${id}`));
    }

    async attack(id: string, edge: EdgeIds): Promise<GameEvent> {
        const resp = await fetch(`${this.base}/sessions/${id}/attack`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify({ edge }),
        });
        return parseOrThrow<GameEvent>(resp);
    }

    async defense(id: string, moves: EdgeIds[]): Promise<GameEvent> {
        const resp = await fetch(`${this.base}/sessions/${id}/defense`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify({ moves }),
        });
        return parseOrThrow<GameEvent>(resp);
    }

    async trace(id: string): Promise<string> {
        const resp = await fetch(`${this.base}/sessions/${id}/trace`);
        return resp.text();
    }
}
