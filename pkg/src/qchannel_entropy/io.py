"""JSON encodings for channels, states and reports.

Complex numbers are written as ``[re, im]`` pairs. A channel is
``{"dim_in": int, "dim_out": int, "kraus": [K_0, K_1, ...]}`` with each
``K_j`` a list of rows of ``[re, im]`` entries. A state is either
``{"dim": int, "matrix": [...]}`` or ``{"bloch": [sx, sy, sz]}``.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .channels import QuantumChannel, bloch_state
from .entropies import check_density_matrix
from .exceptions import ParseError, QChannelError, ValidationError


def encode_matrix(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def _decode_number(value, where: str) -> complex:
    if (
        not isinstance(value, list)
        or len(value) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)
    ):
        raise ParseError(f"{where}: expected a [re, im] pair of numbers, got {json.dumps(value)}")
    re, im = float(value[0]), float(value[1])
    if not (math.isfinite(re) and math.isfinite(im)):
        raise ParseError(f"{where}: non-finite entry")
    return complex(re, im)


def decode_matrix(rows, where: str, shape: tuple[int, int] | None = None) -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise ParseError(f"{where}: expected a non-empty list of rows")
    width = None
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or not row:
            raise ParseError(f"{where}[{i}]: expected a non-empty list of [re, im] entries")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"{where}[{i}]: row has {len(row)} entries, expected {width}")
        out.append([_decode_number(v, f"{where}[{i}][{k}]") for k, v in enumerate(row)])
    M = np.array(out, dtype=complex)
    if shape is not None and M.shape != shape:
        raise ParseError(f"{where}: shape {M.shape} does not match declared {shape}")
    return M


def _positive_int(obj: dict, key: str, where: str) -> int:
    value = obj.get(key)
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ParseError(f"{where}.{key}: expected a positive integer, got {json.dumps(value)}")
    return value


def channel_to_json(channel: QuantumChannel) -> dict:
    return {
        "dim_in": channel.dim_in,
        "dim_out": channel.dim_out,
        "kraus": [encode_matrix(K) for K in channel.kraus],
    }


def channel_from_json(obj) -> QuantumChannel:
    if not isinstance(obj, dict):
        raise ParseError("channel: expected a JSON object")
    dim_in = _positive_int(obj, "dim_in", "channel")
    dim_out = _positive_int(obj, "dim_out", "channel")
    kraus = obj.get("kraus")
    if not isinstance(kraus, list) or not kraus:
        raise ParseError("channel.kraus: expected a non-empty list of matrices")
    ops = [decode_matrix(K, f"kraus[{j}]", (dim_out, dim_in)) for j, K in enumerate(kraus)]
    try:
        return QuantumChannel(ops)
    except QChannelError as exc:
        raise ValidationError(f"channel is not a valid quantum channel: {exc}") from None


def state_to_json(rho) -> dict:
    rho = np.asarray(rho)
    return {"dim": rho.shape[0], "matrix": encode_matrix(rho)}


def state_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise ParseError("state: expected a JSON object")
    try:
        if "bloch" in obj:
            vec = obj["bloch"]
            if not isinstance(vec, list) or len(vec) != 3 or not all(isinstance(x, (int, float)) for x in vec):
                raise ParseError(f"state.bloch: expected three numbers, got {json.dumps(vec)}")
            return bloch_state(vec)
        dim = _positive_int(obj, "dim", "state")
        M = decode_matrix(obj.get("matrix"), "state.matrix", (dim, dim))
        return check_density_matrix(M)
    except ParseError:
        raise
    except QChannelError as exc:
        raise ValidationError(f"state is not a valid density matrix: {exc}") from None


def _load_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def load_channel(path) -> QuantumChannel:
    obj = _load_json(path)
    try:
        return channel_from_json(obj)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def load_state(path) -> np.ndarray:
    obj = _load_json(path)
    try:
        return state_from_json(obj)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"
