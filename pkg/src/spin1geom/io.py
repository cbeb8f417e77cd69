"""State JSON format, mesh export and CSV helpers.

A state file holds either a matrix,
``{"matrix": [[[re, im], [re, im], [re, im]], ...]}``,
or a Bloch pair, ``{"u": [ux, uy, uz], "W": [[...], [...], [...]]}``.
"""

import csv
import io
import json

import numpy as np

from .states import BlochPair


class StateFormatError(ValueError):
    """The input could not be parsed as a state file."""


def fmt(x):
    """17 significant digits: enough for a lossless double round-trip."""
    return format(float(x), ".17g")


def parse_state(text):
    """Parse state JSON into a complex 3x3 matrix or a :class:`BlochPair`.

    Only the shape is checked here; Hermiticity, trace and positivity are
    checked by the caller.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFormatError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise StateFormatError("state file must contain a JSON object")
    if "matrix" in obj:
        try:
            m = np.array(obj["matrix"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise StateFormatError(f"matrix entries must be numbers: {exc}") from exc
        if m.shape != (3, 3, 2):
            raise StateFormatError(f"matrix must be 3x3 of [re, im] pairs, got shape {m.shape}")
        return m[..., 0] + 1j * m[..., 1]
    if "u" in obj and "W" in obj:
        try:
            u = np.array(obj["u"], dtype=float)
            W = np.array(obj["W"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise StateFormatError(f"u and W entries must be numbers: {exc}") from exc
        if u.shape != (3,) or W.shape != (3, 3):
            raise StateFormatError(f"expected u of length 3 and 3x3 W, got {u.shape} and {W.shape}")
        return u, W
    raise StateFormatError('state JSON needs either "matrix" or both "u" and "W"')


def matrix_to_json(rho):
    rho = np.asarray(rho, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in rho]


def state_to_json(state):
    if isinstance(state, BlochPair):
        return {"u": [float(x) for x in state.u], "W": [[float(x) for x in row] for row in state.W]}
    return {"matrix": matrix_to_json(state)}


def rows_to_csv(header, rows, comments=()):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(x) if isinstance(x, (float, np.floating)) else x for x in row])
    for line in comments:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def read_csv(text):
    """Parse CSV produced by :func:`rows_to_csv`; ``#`` lines are skipped."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader)
    return header, [row for row in reader]


def mesh_to_csv(meshes):
    """``meshes`` is a sequence of ``(points, family)`` pairs."""
    rows = []
    for points, family in meshes:
        rows.extend([float(p[0]), float(p[1]), float(p[2]), family] for p in points)
    return rows_to_csv(["ux", "uy", "uz", "family"], rows)


def mesh_to_json(spec, points):
    return {
        "mu": [float(x) for x in spec.mu],
        "family": spec.family.value,
        "semiAxes": [float(x) for x in spec.semi_axes],
        "points": [[float(x) for x in p] for p in points],
    }
