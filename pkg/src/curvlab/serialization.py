"""File formats: tensor JSON, frame JSON, trace CSV.

Writers emit floating-point values with 17 significant digits so that a
write/read cycle reproduces IEEE doubles bit for bit.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .flow import TRACE_COLUMNS, FlowTrace, TraceRow
from .frames import Frame
from .tensors import CurvatureTensor

__all__ = [
    "fmt17",
    "dumps_json",
    "tensor_to_json",
    "tensor_from_json",
    "write_tensor",
    "read_tensor",
    "frame_to_json",
    "frame_from_json",
    "write_frame",
    "read_frame",
    "trace_to_csv",
    "trace_from_csv",
    "write_trace",
    "read_trace",
]


def fmt17(x: float) -> str:
    """A float at 17 significant digits (lossless double round trip)."""
    return format(float(x), ".17g")


def dumps_json(obj, indent: int = 2) -> str:
    """json.dumps with floats emitted at 17 significant digits, keys sorted."""
    return _emit(obj, indent, 0) + "\n"


def _emit(obj, indent: int, level: int) -> str:
    pad = " " * (indent * level)
    inner = " " * (indent * (level + 1))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (f'{inner}{json.dumps(str(k))}: {_emit(v, indent, level + 1)}' for k, v in sorted(obj.items()))
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = (f"{inner}{_emit(v, indent, level + 1)}" for v in obj)
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        if not np.isfinite(obj):
            raise ValueError("cannot serialize non-finite float")
        return fmt17(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# ---------------------------------------------------------------------------
# Tensors


def tensor_to_json(r: CurvatureTensor) -> str:
    comps = ", ".join(fmt17(x) for x in r.comps)
    return f'{{"n": {r.n}, "components": [{comps}]}}\n'


def tensor_from_json(text: str) -> CurvatureTensor:
    data = json.loads(text)
    if not isinstance(data, dict) or set(data) != {"n", "components"}:
        raise ValueError('tensor JSON must be an object with keys "n" and "components"')
    n = data["n"]
    comps = data["components"]
    if not isinstance(n, int) or not isinstance(comps, list):
        raise ValueError("tensor JSON has wrong field types")
    return CurvatureTensor(n=n, comps=np.asarray(comps, dtype=float))


def write_tensor(path: str, r: CurvatureTensor) -> None:
    with open(path, "w") as fh:
        fh.write(tensor_to_json(r))


def read_tensor(path: str) -> CurvatureTensor:
    with open(path) as fh:
        return tensor_from_json(fh.read())


# ---------------------------------------------------------------------------
# Frames


def frame_to_json(f: Frame) -> str:
    rows = ", ".join("[" + ", ".join(fmt17(x) for x in row) + "]" for row in f.vectors)
    return f'{{"n": {f.n}, "vectors": [{rows}]}}\n'


def frame_from_json(text: str) -> Frame:
    data = json.loads(text)
    if not isinstance(data, dict) or set(data) != {"n", "vectors"}:
        raise ValueError('frame JSON must be an object with keys "n" and "vectors"')
    n = data["n"]
    vectors = data["vectors"]
    if not isinstance(n, int) or not isinstance(vectors, list):
        raise ValueError("frame JSON has wrong field types")
    return Frame(n=n, vectors=np.asarray(vectors, dtype=float))


def write_frame(path: str, f: Frame) -> None:
    with open(path, "w") as fh:
        fh.write(frame_to_json(f))


def read_frame(path: str) -> Frame:
    with open(path) as fh:
        return frame_from_json(fh.read())


# ---------------------------------------------------------------------------
# Traces


def trace_to_csv(trace: FlowTrace) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRACE_COLUMNS)
    for row in trace.rows:
        writer.writerow([fmt17(x) for x in row.astuple()])
    return buf.getvalue()


def trace_from_csv(text: str) -> FlowTrace:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty trace CSV") from None
    if tuple(header) != TRACE_COLUMNS:
        raise ValueError(f"trace CSV header must be {','.join(TRACE_COLUMNS)}")
    rows = []
    for line in reader:
        if not line:
            continue
        if len(line) != len(TRACE_COLUMNS):
            raise ValueError(f"trace CSV row has {len(line)} fields, expected {len(TRACE_COLUMNS)}")
        vals = [float(x) for x in line]
        rows.append(TraceRow(*vals))
    return FlowTrace(rows=tuple(rows))


def write_trace(path: str, trace: FlowTrace) -> None:
    with open(path, "w") as fh:
        fh.write(trace_to_csv(trace))


def read_trace(path: str) -> FlowTrace:
    with open(path) as fh:
        return trace_from_csv(fh.read())
