#!/usr/bin/env python3
"""Record web-ui fixtures by driving the real session service in-process.

Each fixture bundles the creation view plus a scripted sequence of requests,
their responses, and a fresh GET snapshot after every step, so the browser
client's state can be replay-tested without a live server.

Usage: python scripts/record_fixtures.py [outdir]   (default frontend/fixtures)
"""

import json
import sys
from pathlib import Path

from fastapi.testclient import TestClient

from evcgame.session import create_app

RBDS_YES = {"reds": ["r1", "r2"], "blues": ["b1", "b2"],
            "edges": [["r1", "b1"], ["r1", "b2"], ["r2", "b2"]], "k": 1}

COBIP_GRAPH = ("graph 5\nv a1\nv a2\nv b1\nv b2\nv b3\n"
               "e a1 a2\ne b1 b2\ne b1 b3\ne b2 b3\n"
               "e a1 b1\ne a2 b2\ne a2 b3\n")
COBIP_SIDES = "side a1 A\nside a2 A\nside b1 B\nside b2 B\nside b3 B\n"

C4_GRAPH = "graph 4\ne a b\ne b c\ne c d\ne a d\n"


def record(client, create_body, steps):
    r = client.post("/sessions", json=create_body)
    assert r.status_code == 201, r.text
    view = r.json()
    sid = view["id"]
    out = {"create_request": create_body, "create": view, "steps": []}
    for action, body in steps:
        resp = client.post(f"/sessions/{sid}/{action}", json=body)
        step = {
            "action": action,
            "request": body,
            "status_code": resp.status_code,
            "response": resp.json(),
            "state_after": client.get(f"/sessions/{sid}").json(),
        }
        out["steps"].append(step)
    return out


def main(outdir: Path) -> None:
    app = create_app(trace_dir=None)
    client = TestClient(app)
    fixtures = {}

    fixtures["k2-exact"] = record(
        client,
        {"mode": "human-attacker", "defender_source": "exact",
         "graph": "graph 2\ne a b", "k": 1, "seed": 0},
        [("attack", {"edge": ["a", "b"]}),
         ("attack", {"edge": ["a", "b"]})])

    fixtures["reduced-yes"] = record(
        client,
        {"mode": "human-attacker", "defender_source": "reduction-nice",
         "rbds": RBDS_YES, "seed": 0},
        [("attack", {"edge": ["star", "dagger"]}),
         ("attack", {"edge": ["star", "wstar_3"]}),
         ("attack", {"edge": ["v1", "u1"]}),
         ("attack", {"edge": ["u2", "w2_4"]}),
         ("attack", {"edge": ["doesnotexist", "u1"]})])

    fixtures["cobip"] = record(
        client,
        {"mode": "human-attacker", "defender_source": "cobipartite",
         "graph": COBIP_GRAPH, "sides": COBIP_SIDES, "seed": 0},
        [("attack", {"edge": ["a1", "a2"]}),
         ("attack", {"edge": ["b1", "b2"]})])

    # a human-defender session on C4: one legal exchange, the three
    # rejection classes, then a cover-breaking loss
    app2 = create_app(trace_dir=None)
    client2 = TestClient(app2)
    r = client2.post("/sessions", json={
        "mode": "human-defender", "defender_source": "exact",
        "graph": C4_GRAPH, "k": 2, "seed": 4})
    assert r.status_code == 201
    view = r.json()
    sid = view["id"]
    fx = {"create_request": "see body", "create": view, "steps": []}

    def defend(moves):
        resp = client2.post(f"/sessions/{sid}/defense", json={"moves": moves})
        fx["steps"].append({
            "action": "defense", "request": {"moves": moves},
            "status_code": resp.status_code, "response": resp.json(),
            "state_after": client2.get(f"/sessions/{sid}").json()})
        return resp

    state = view
    u, v = state["pending_attack"]
    cfg = set(state["config"])
    guard = u if u in cfg else v
    hole = v if guard == u else u
    defend([])                                      # no-crossing
    defend([[hole, guard]])                         # not-a-bijection
    diag = {"a": "c", "b": "d", "c": "a", "d": "b"}  # C4 non-neighbors
    defend([[guard, diag[guard]]])                  # neighborhood-violation
    defend([[guard, hole]])                         # legal but cover-breaking
    fixtures["defense-c4"] = fx

    outdir.mkdir(parents=True, exist_ok=True)
    for name, fx in fixtures.items():
        path = outdir / f"{name}.json"
        path.write_text(json.dumps(fx, indent=2) + "\n", encoding="utf-8")
        print(f"wrote {path} ({len(fx['steps'])} steps)")


if __name__ == "__main__":
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else \
        Path(__file__).resolve().parent.parent / "frontend" / "fixtures"
    main(out)
