"""Read-only HTTP service over one clustering run.

The expensive bottom-up stage happens before the server starts; requests only
re-cut the immutable tree.  Endpoints:

  GET  /decision-graph   the exported document
  GET  /meta             {n, method, k, sigma, mode, trace}
  POST /cut              {"topk": K} | {"autogap": {"window": m}} |
                         {"box": {"min_edge_len": w, "max_potential": p}} |
                         {"nodes": [ids]}  ->  {"labels": [...], "clusters": C}
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np

from .cuts import (
    AutoGap,
    Box,
    CutSpec,
    InvalidCutError,
    NodeSet,
    TopK,
    apply_cut,
    document_to_json,
    tree_from_document,
)
from .tree import InTree


@dataclass(frozen=True)
class ServeState:
    document: dict
    tree: InTree
    potential: np.ndarray
    meta: dict

    @classmethod
    def from_document(cls, doc: dict, meta: dict | None = None) -> "ServeState":
        tree, potential = tree_from_document(doc)
        base = {
            "n": doc["n"],
            "method": None,
            "k": None,
            "sigma": None,
            "mode": None,
            "trace": doc.get("trace", []),
        }
        if meta:
            base.update(meta)
        return cls(doc, tree, potential, base)


def parse_cut_body(body: dict) -> CutSpec:
    """Translate a /cut request body into a cut spec; raises ValueError."""
    if not isinstance(body, dict) or len(body) != 1:
        raise ValueError("cut body must contain exactly one spec")
    key, value = next(iter(body.items()))
    if key == "topk":
        if not isinstance(value, int) or isinstance(value, bool):
            raise ValueError("topk must be an integer")
        return TopK(value)
    if key == "autogap":
        if value is None:
            return AutoGap()
        if not isinstance(value, dict):
            raise ValueError("autogap takes an object with a window")
        window = value.get("window", 50)
        if not isinstance(window, int) or isinstance(window, bool):
            raise ValueError("window must be an integer")
        return AutoGap(window)
    if key == "box":
        if not isinstance(value, dict):
            raise ValueError("box takes an object")
        try:
            return Box(float(value["min_edge_len"]), float(value["max_potential"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"bad box spec: {exc}") from exc
    if key == "nodes":
        if not isinstance(value, list) or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in value
        ):
            raise ValueError("nodes must be a list of integers")
        return NodeSet(value)
    raise ValueError(f"unknown cut kind {key!r}")


class _Handler(BaseHTTPRequestHandler):
    state: ServeState  # set on the subclass built by make_server

    def log_message(self, fmt, *args):  # keep test output clean
        pass

    def _send(self, code: int, payload) -> None:
        body = json.dumps(payload, separators=(",", ":"), sort_keys=True).encode()
        self.send_response(code)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        if self.path == "/decision-graph":
            body = document_to_json(self.state.document).encode()
            self.send_response(200)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)
        elif self.path == "/meta":
            self._send(200, self.state.meta)
        elif self.path == "/" or self.path == "/index.html":
            self._send(404, {"error": "no UI bundled; use the frontend app"})
        else:
            self._send(404, {"error": f"unknown route {self.path}"})

    def do_POST(self):
        if self.path != "/cut":
            self._send(404, {"error": f"unknown route {self.path}"})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            body = json.loads(self.rfile.read(length) or b"null")
            spec = parse_cut_body(body)
        except (ValueError, json.JSONDecodeError) as exc:
            self._send(400, {"error": str(exc)})
            return
        state = self.state
        if not state.tree.root_mask.sum() == 1:
            self._send(400, {"error": "document is a forest; cuts need a single-root tree"})
            return
        try:
            labels = apply_cut(state.tree, spec, state.potential)
        except InvalidCutError as exc:
            self._send(422, {"error": str(exc)})
            return
        self._send(
            200,
            {"labels": labels.tolist(), "clusters": int(labels.max()) + 1},
        )

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()


def make_server(state: ServeState, host: str = "127.0.0.1", port: int = 0) -> ThreadingHTTPServer:
    """Bound but not yet serving; call serve_forever() or run it in a thread."""
    handler = type("BoundHandler", (_Handler,), {"state": state})
    return ThreadingHTTPServer((host, port), handler)
