"""OpenQASM 2.0 export (with exact, ancilla-free decomposition of controlled blocks) and a subset parser."""

from __future__ import annotations

import ast
import json
import math
import operator
import re

from ..qsim import Circuit, Gate, Layout, controlled, phase
from ..qsim import cnot as _cnot
from ..qsim import h as _h
from ..qsim import ry as _ry
from ..qsim import swap as _swap
from ..qsim import x as _x
from ..qsim import z as _z


class QasmError(ValueError):
    pass


def _fmt(angle: float) -> str:
    return repr(float(angle))


class _Emitter:
    def __init__(self, num_qubits: int):
        self.num_qubits = num_qubits
        self.scratch = None
        self.lines: list[str] = []

    def op(self, name: str, *qs: int, angle: float | None = None):
        args = ", ".join(f"q[{q}]" for q in qs)
        head = name if angle is None else f"{name}({_fmt(angle)})"
        self.lines.append(f"{head} {args};")

    def free_wire(self, busy) -> int:
        for q in range(self.num_qubits):
            if q not in busy:
                return q
        if self.scratch is None:
            self.scratch = self.num_qubits
        return self.scratch

    # multi-controlled primitives on positive controls
    def mcry(self, angle: float, ctrl: list[int], t: int):
        if not ctrl:
            self.op("ry", t, angle=angle)
            return
        *rest, c = ctrl
        self.mcry(angle / 2, rest, t)
        self.op("cx", c, t)
        self.mcry(-angle / 2, rest, t)
        self.op("cx", c, t)

    def mcz(self, wires: list[int]):
        if len(wires) == 1:
            self.op("z", wires[0])
        elif len(wires) == 2:
            a, b = wires
            self.op("h", b)
            self.op("cx", a, b)
            self.op("h", b)
        elif len(wires) == 3:
            a, b, c = wires
            self.op("h", c)
            self.op("ccx", a, b, c)
            self.op("h", c)
        else:
            # a full 2pi turn is -1 on any wire, so the wire's state is irrelevant
            self.mcry(2 * math.pi, list(wires), self.free_wire(set(wires)))

    def mcx(self, ctrl: list[int], t: int):
        if not ctrl:
            self.op("x", t)
        elif len(ctrl) == 1:
            self.op("cx", ctrl[0], t)
        elif len(ctrl) == 2:
            self.op("ccx", ctrl[0], ctrl[1], t)
        else:
            self.op("h", t)
            self.mcz(ctrl + [t])
            self.op("h", t)

    def mcp(self, angle: float, ctrl: list[int], t: int):
        if not ctrl:
            self.op("u1", t, angle=angle)
        elif len(ctrl) == 1:
            self.op("cu1", ctrl[0], t, angle=angle)
        else:
            *rest, c = ctrl
            self.op("cu1", c, t, angle=angle / 2)
            self.mcx(rest, c)
            self.op("cu1", c, t, angle=-angle / 2)
            self.mcx(rest, c)
            self.mcp(angle / 2, rest, t)

    def gate(self, g: Gate, ctrl: list[int]):
        kind = g.kind
        if kind == "block":
            neg = [q for q, b in g.controls if b == 0]
            for q in neg:
                self.op("x", q)
            inner = ctrl + [q for q, _ in g.controls]
            for sub in g.body:
                self.gate(sub, inner)
            for q in neg:
                self.op("x", q)
            return
        t = g.targets[-1]
        if kind == "x":
            self.mcx(ctrl, t)
        elif kind == "z":
            self.mcz(ctrl + [t])
        elif kind == "h":
            if ctrl:
                self.mcz(ctrl + [t])
                self.mcry(math.pi / 2, ctrl, t)
            else:
                self.op("h", t)
        elif kind == "ry":
            self.mcry(g.angle, ctrl, t)
        elif kind == "p":
            self.mcp(g.angle, ctrl, t)
        elif kind == "cnot":
            self.mcx(ctrl + [g.targets[0]], t)
        elif kind == "swap":
            a, b = g.targets
            if ctrl:
                self.op("cx", b, a)
                self.mcx(ctrl + [a], b)
                self.op("cx", b, a)
            else:
                self.op("swap", a, b)
        else:  # pragma: no cover
            raise QasmError(f"cannot export gate kind {kind!r}")


def to_qasm(circuit: Circuit) -> str:
    """OpenQASM 2.0 text; layout recorded in ``// layout.*`` comments.

    A scratch qubit is appended (and listed among the controls) only when a
    large multi-controlled Z touches every wire.
    """
    em = _Emitter(circuit.num_qubits)
    for g in circuit.gates:
        em.gate(g, [])
    width = circuit.num_qubits + (em.scratch is not None)
    controls = list(circuit.layout.controls)
    if em.scratch is not None and circuit.layout.all_qubits():
        controls.append(em.scratch)
    head = [
        "OPENQASM 2.0;",
        'include "qelib1.inc";',
        f"// layout.variables: {json.dumps([list(v) for v in circuit.layout.variables])}",
        f"// layout.controls: {json.dumps(controls)}",
        f"qreg q[{width}];",
    ]
    return "\n".join(head + em.lines) + "\n"


# -- parsing ---------------------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def eval_angle(text: str) -> float:
    """Evaluate a QASM parameter expression (numbers, ``pi``, + - * /)."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        raise QasmError(f"unsupported angle expression {text!r}")

    try:
        return ev(ast.parse(text.strip(), mode="eval"))
    except SyntaxError as exc:
        raise QasmError(f"bad angle expression {text!r}") from exc


_STMT = re.compile(r"^(\w+)\s*(?:\(([^)]*)\))?\s+(.+)$")
_ARG = re.compile(r"^(\w+)\[(\d+)\]$")

_ARITY = {"x": 1, "h": 1, "z": 1, "ry": 1, "u1": 1, "cx": 2, "swap": 2, "ccx": 3, "cu1": 2}


def from_qasm(text: str) -> Circuit:
    """Parse the OpenQASM 2.0 subset written by :func:`to_qasm`."""
    num = None
    variables, controls = (), ()
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("// layout.variables:"):
            variables = tuple(tuple(v) for v in json.loads(line.split(":", 1)[1]))
            continue
        if line.startswith("// layout.controls:"):
            controls = tuple(json.loads(line.split(":", 1)[1]))
            continue
        line = line.split("//", 1)[0].strip()
        if not line:
            continue
        for stmt in filter(None, (s.strip() for s in line.split(";"))):
            if stmt.startswith("OPENQASM") or stmt.startswith("include") or stmt.startswith("creg") or stmt.startswith("barrier"):
                continue
            if stmt.startswith("qreg"):
                m = re.match(r"qreg\s+\w+\[(\d+)\]", stmt)
                if not m:
                    raise QasmError(f"line {lineno}: bad qreg")
                num = int(m.group(1))
                continue
            m = _STMT.match(stmt)
            if not m:
                raise QasmError(f"line {lineno}: cannot parse {stmt!r}")
            name, param, args = m.groups()
            if name not in _ARITY:
                raise QasmError(f"line {lineno}: unsupported gate {name!r}")
            qs = []
            for a in args.split(","):
                am = _ARG.match(a.strip())
                if not am:
                    raise QasmError(f"line {lineno}: bad argument {a!r}")
                qs.append(int(am.group(2)))
            if len(qs) != _ARITY[name]:
                raise QasmError(f"line {lineno}: {name} takes {_ARITY[name]} qubits")
            angle = eval_angle(param) if param is not None else None
            if name in ("ry", "u1", "cu1") and angle is None:
                raise QasmError(f"line {lineno}: {name} needs an angle")
            gates.append(_gate(name, qs, angle))
    if num is None:
        raise QasmError("missing qreg declaration")
    return Circuit(num, gates, Layout(variables, controls))


def _gate(name, qs, angle) -> Gate:
    if name == "x":
        return _x(qs[0])
    if name == "h":
        return _h(qs[0])
    if name == "z":
        return _z(qs[0])
    if name == "ry":
        return _ry(qs[0], angle)
    if name == "u1":
        return phase(qs[0], angle)
    if name == "cx":
        return _cnot(qs[0], qs[1])
    if name == "swap":
        return _swap(qs[0], qs[1])
    if name == "ccx":
        return controlled([(qs[0], 1), (qs[1], 1)], [_x(qs[2])])
    return controlled([(qs[0], 1)], [phase(qs[1], angle)])
