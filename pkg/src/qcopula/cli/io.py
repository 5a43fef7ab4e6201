"""Circuit JSON, grid CSV and PGM rasters."""

from __future__ import annotations

import csv
import io
import itertools
import json

import numpy as np

from ..qsim import Circuit, Gate, Layout

SCHEMA = "qcopula.circuit/1"


def gate_to_dict(g: Gate) -> dict:
    d = {"kind": g.kind, "targets": list(g.targets)}
    if g.angle is not None:
        d["angle"] = float(g.angle)
    if g.controls:
        d["controls"] = [[q, b] for q, b in g.controls]
    if g.body:
        d["body"] = [gate_to_dict(b) for b in g.body]
    return d


def gate_from_dict(d: dict) -> Gate:
    body = tuple(gate_from_dict(b) for b in d.get("body", ()))
    controls = tuple((int(q), int(b)) for q, b in d.get("controls", ()))
    return Gate(d["kind"], tuple(d["targets"]), d.get("angle"), controls, body)


def circuit_to_json(circuit: Circuit) -> str:
    doc = {
        "schema": SCHEMA,
        "num_qubits": circuit.num_qubits,
        "layout": {
            "variables": [list(v) for v in circuit.layout.variables],
            "controls": list(circuit.layout.controls),
        },
        "gates": [gate_to_dict(g) for g in circuit.gates],
    }
    # json writes floats with repr, i.e. shortest round-tripping digits
    return json.dumps(doc, indent=1)


def circuit_from_json(text: str) -> Circuit:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unsupported circuit schema {doc.get('schema')!r}")
    lay = doc.get("layout", {})
    layout = Layout(tuple(tuple(v) for v in lay.get("variables", ())), tuple(lay.get("controls", ())))
    return Circuit(int(doc["num_qubits"]), tuple(gate_from_dict(g) for g in doc["gates"]), layout)


def grid_to_csv(cells: np.ndarray) -> str:
    cells = np.asarray(cells)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow([f"x{i + 1}" for i in range(cells.ndim)] + ["probability"])
    for idx in itertools.product(*(range(s) for s in cells.shape)):
        w.writerow(list(idx) + [repr(float(cells[idx]))])
    return buf.getvalue()


def grid_from_csv(text: str) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], [r for r in rows[1:] if r]
    n = len(header) - 1
    if n < 1 or header[-1] != "probability":
        raise ValueError("expected columns x1..xn,probability")
    idx = np.array([[int(v) for v in r[:n]] for r in body])
    size = int(idx.max()) + 1
    size = 1 << (size - 1).bit_length()
    cells = np.zeros((size,) * n)
    for r, i in zip(body, idx):
        cells[tuple(i)] = float(r[n])
    return cells


def counts_to_csv(counts: dict[int, int], n: int, k: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow([f"x{i + 1}" for i in range(n)] + ["count"])
    for flat, c in sorted(counts.items()):
        cells = np.unravel_index(flat, (2**k,) * n)
        w.writerow([int(v) for v in cells] + [c])
    return buf.getvalue()


def pgm_bytes(gray: np.ndarray) -> bytes:
    """Binary P5 image from a 2-d array of 0..255 levels."""
    img = np.asarray(gray, dtype=np.uint8)
    h, w = img.shape
    return f"P5\n{w} {h}\n255\n".encode() + img.tobytes()


def density_pgm(pair: np.ndarray) -> bytes:
    """Rows follow the first variable's cell, columns the second's; gray is proportional to probability."""
    peak = pair.max()
    gray = np.zeros_like(pair) if peak <= 0 else np.rint(255 * pair / peak)
    return pgm_bytes(gray)


def unitary_pgm(u: np.ndarray) -> bytes:
    """Zero entries mid-gray, positive lighter, negative darker (real part)."""
    re = np.real(u)
    peak = np.abs(re).max() or 1.0
    return pgm_bytes(np.rint(127.5 + 127.5 * re / peak))


def read_pgm(data: bytes) -> np.ndarray:
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    w, h = (int(v) for v in parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w)
