"""Plain-text complex matrix files and two-way channel scenarios.

Format: a header line ``#name rows cols`` followed by ``rows`` lines of
``cols`` whitespace-separated complex tokens such as ``0.5+0j`` or
``-1e-3-2.5j``. Blank lines are ignored.

A scenario file defines ``pL`` and ``pR`` (1 x n probability rows), letter
states ``rhoL.0``, ``rhoL.1``, ... and ``rhoR.0``, ..., detector elements
``FR.0``, ... (right detector) and ``FL.0``, ... (left detector), and an
optional scattering matrix ``S`` (identity when absent).
"""
from __future__ import annotations

import re
from typing import Mapping

import numpy as np

from .qinfo import Ensemble, Povm, TwoWayChannel


class MatrixFormatError(ValueError):
    """Malformed matrix file."""


_HEADER = re.compile(r"^#\s*(\S+)\s+(\d+)\s+(\d+)\s*$")


def parse_matrices(text: str) -> dict:
    out = {}
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln]
    pos = 0
    while pos < len(lines):
        lineno, line = lines[pos]
        m = _HEADER.match(line)
        if not m:
            raise MatrixFormatError(f"line {lineno}: expected '#name rows cols' header")
        name, rows, cols = m.group(1), int(m.group(2)), int(m.group(3))
        if name in out:
            raise MatrixFormatError(f"line {lineno}: duplicate matrix {name!r}")
        body = lines[pos + 1: pos + 1 + rows]
        if len(body) != rows:
            raise MatrixFormatError(f"matrix {name!r}: expected {rows} rows")
        mat = np.empty((rows, cols), dtype=complex)
        for r, (ln_no, row) in enumerate(body):
            tokens = row.split()
            if len(tokens) != cols:
                raise MatrixFormatError(f"line {ln_no}: expected {cols} entries")
            try:
                mat[r] = [complex(t) for t in tokens]
            except ValueError as exc:
                raise MatrixFormatError(f"line {ln_no}: {exc}") from None
        out[name] = mat
        pos += 1 + rows
    return out


def format_matrices(mats: Mapping[str, np.ndarray]) -> str:
    parts = []
    for name, mat in mats.items():
        mat = np.atleast_2d(np.asarray(mat, dtype=complex))
        parts.append(f"#{name} {mat.shape[0]} {mat.shape[1]}")
        for row in mat:
            parts.append(" ".join(f"{z.real:.17g}{z.imag:+.17g}j" for z in row))
    return "\n".join(parts) + "\n"


def read_matrices(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return parse_matrices(fh.read())


def write_matrices(path, mats: Mapping[str, np.ndarray]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_matrices(mats))


def _indexed(mats: dict, prefix: str) -> list:
    found = []
    i = 0
    while f"{prefix}.{i}" in mats:
        found.append(mats[f"{prefix}.{i}"])
        i += 1
    if not found:
        raise MatrixFormatError(f"scenario needs {prefix}.0, {prefix}.1, ...")
    return found


def _probs(mats: dict, name: str) -> np.ndarray:
    if name not in mats:
        raise MatrixFormatError(f"scenario needs {name}")
    p = mats[name]
    if p.shape[0] != 1 or np.max(np.abs(p.imag)) > 0.0:
        raise MatrixFormatError(f"{name} must be a single real row")
    return p.real.ravel()


def channel_from_matrices(mats: dict) -> TwoWayChannel:
    left = Ensemble(_probs(mats, "pL"), _indexed(mats, "rhoL"))
    right = Ensemble(_probs(mats, "pR"), _indexed(mats, "rhoR"))
    scattering = mats.get("S", np.eye(left.dim * right.dim))
    return TwoWayChannel(left, right, scattering, Povm(_indexed(mats, "FR")), Povm(_indexed(mats, "FL")))


def channel_to_matrices(ch: TwoWayChannel) -> dict:
    mats = {"pL": ch.left.probs[None, :]}
    mats.update({f"rhoL.{i}": s for i, s in enumerate(ch.left.states)})
    mats["pR"] = ch.right.probs[None, :]
    mats.update({f"rhoR.{i}": s for i, s in enumerate(ch.right.states)})
    mats.update({f"FR.{i}": f for i, f in enumerate(ch.right_detector.elements)})
    mats.update({f"FL.{i}": f for i, f in enumerate(ch.left_detector.elements)})
    mats["S"] = ch.scattering
    return mats


def read_scenario(path) -> TwoWayChannel:
    return channel_from_matrices(read_matrices(path))


def write_scenario(path, ch: TwoWayChannel) -> None:
    write_matrices(path, channel_to_matrices(ch))
