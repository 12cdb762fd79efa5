"""The plain-text structure format.

    ring <name>
    order <n>
    one <idx>
    add
    <n rows of n indices>
    mul
    <n rows of n indices>

    module <name> over <ringname>
    order <m>
    label <text>          (optional)
    add
    <m rows of m indices>
    act
    <m rows of |R| indices>
    embed <m' indices>    (optional: map from the input module)

Lines starting with ``#`` and blank lines are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..finite_algebra import FiniteRing, RightModule, module_from_action, validate_ring


class FormatError(ValueError):
    pass


@dataclass
class Structures:
    rings: dict[str, FiniteRing] = field(default_factory=dict)
    modules: dict[str, RightModule] = field(default_factory=dict)
    embeds: dict[str, list[int]] = field(default_factory=dict)

    def module(self, name: str) -> RightModule:
        """A module by name; a ring name stands for its regular module."""
        if name in self.modules:
            return self.modules[name]
        if name in self.rings:
            return self.rings[name].regular_module
        raise FormatError(f"no module or ring named {name!r}")


def _rows(text: np.ndarray) -> str:
    return "".join(" ".join(str(int(v)) for v in row) + "\n" for row in text)


def write_ring(R: FiniteRing, name: str | None = None) -> str:
    return f"ring {name or R.name}\norder {R.order}\none {R.one}\nadd\n{_rows(R.add)}mul\n{_rows(R.mul)}"


def write_module(M: RightModule, name: str | None = None, ring_name: str | None = None, embed=None) -> str:
    out = f"module {name or M.name} over {ring_name or M.ring.name}\norder {M.order}\n"
    if M.label:
        out += f"label {M.label}\n"
    out += f"add\n{_rows(M.add)}act\n{_rows(M.act)}"
    if embed is not None:
        out += "embed " + " ".join(str(int(v)) for v in embed) + "\n"
    return out


def parse(text: str) -> Structures:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    out = Structures()
    pos = 0

    def take() -> str:
        nonlocal pos
        if pos >= len(lines):
            raise FormatError("unexpected end of input")
        pos += 1
        return lines[pos - 1]

    def keyed(key: str) -> str:
        ln = take()
        head, _, rest = ln.partition(" ")
        if head != key:
            raise FormatError(f"expected {key!r}, found {ln!r}")
        return rest.strip()

    def ints(words, what: str) -> list[int]:
        try:
            return [int(v) for v in words]
        except ValueError:
            raise FormatError(f"non-integer entry in {what}: {' '.join(words)!r}") from None

    def table(rows: int, cols: int) -> np.ndarray:
        data = []
        for _ in range(rows):
            vals = take().split()
            if len(vals) != cols:
                raise FormatError(f"row of length {len(vals)}, expected {cols}")
            data.append(ints(vals, "table row"))
        return np.array(data, dtype=np.int64).reshape(rows, cols)

    while pos < len(lines):
        head = take()
        if head.startswith("ring "):
            name = head[5:].strip()
            n = ints([keyed("order")], "order")[0]
            one = ints([keyed("one")], "one")[0]
            keyed("add")
            add = table(n, n)
            keyed("mul")
            mul = table(n, n)
            out.rings[name] = validate_ring(add, mul, one, name=name)
        elif head.startswith("module "):
            words = head.split()
            if len(words) != 4 or words[2] != "over":
                raise FormatError(f"bad module header {head!r}")
            name, rname = words[1], words[3]
            if rname not in out.rings:
                raise FormatError(f"module {name} over unknown ring {rname}")
            R = out.rings[rname]
            m = ints([keyed("order")], "order")[0]
            label = ""
            nxt = take()
            if nxt.startswith("label"):
                label = nxt[5:].strip()
                nxt = take()
            if nxt != "add":
                raise FormatError(f"expected 'add', found {nxt!r}")
            add = table(m, m)
            keyed("act")
            act = table(m, R.order)
            out.modules[name] = module_from_action(R, add, act, label=label, name=name)
            if pos < len(lines) and lines[pos].startswith("embed"):
                out.embeds[name] = ints(take().split()[1:], "embed")
        else:
            raise FormatError(f"unexpected line {head!r}")
    return out


def load(path: str) -> Structures:
    with open(path) as fh:
        return parse(fh.read())
