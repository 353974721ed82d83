"""Canonical vertex labels for the hub-and-sets graphs.

Labels are plain strings so that spaces round-trip through JSON:

    "0"        hub vertex
    "7"        integer vertex 7
    "{1,3}"    finite subset vertex (sorted, no spaces)
    "[1..4]"   initial segment vertex
    "[3..]"    tail segment vertex
"""

from __future__ import annotations

import re

from .errors import InputError

ZERO = "0"

_SET_RE = re.compile(r"^\{(\d+(,\d+)*)\}$")
_INIT_RE = re.compile(r"^\[1\.\.(\d+)\]$")
_TAIL_RE = re.compile(r"^\[(\d+)\.\.\]$")


def int_label(a: int) -> str:
    return str(a)


def set_label(mask: int) -> str:
    if mask <= 0:
        raise InputError("subset vertex must be a nonempty set")
    elems = [str(i + 1) for i in range(mask.bit_length()) if (mask >> i) & 1]
    return "{" + ",".join(elems) + "}"


def init_label(n: int) -> str:
    return f"[1..{n}]"


def tail_label(n: int) -> str:
    return f"[{n}..]"


def parse_set_label(label: str) -> int:
    m = _SET_RE.match(label)
    if not m:
        raise InputError(f"not a subset label: {label!r}")
    mask = 0
    for part in m.group(1).split(","):
        e = int(part)
        if e < 1:
            raise InputError(f"subset elements start at 1: {label!r}")
        mask |= 1 << (e - 1)
    return mask


def classify(label: str) -> tuple[str, int]:
    """Return (kind, payload): zero|int|set|init|tail with index or bitmask."""
    if label == ZERO:
        return "zero", 0
    if re.match(r"^[1-9]\d*$", label):
        return "int", int(label)
    m = _INIT_RE.match(label)
    if m:
        return "init", int(m.group(1))
    m = _TAIL_RE.match(label)
    if m:
        return "tail", int(m.group(1))
    if _SET_RE.match(label):
        return "set", parse_set_label(label)
    raise InputError(f"unrecognized vertex label: {label!r}")
