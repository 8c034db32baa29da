"""ECF binary cloud files, CSV interchange and JSON verification reports.

ECF layout (all little-endian)::

    b"ECF1" | uint32 N | uint32 n | N*n float64, row-major
"""

import csv
import json
import math
import struct

import numpy as np

MAGIC = b"ECF1"
_HEADER = struct.Struct("<4sII")
REPORT_SCHEMA_VERSION = 1


class EcfError(ValueError):
    pass


def encode_ecf(cloud):
    X = np.asarray(cloud, dtype=np.float64)
    if X.ndim != 2:
        raise EcfError(f"cloud must be 2-D, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise EcfError("refusing to write non-finite values")
    N, n = X.shape
    return _HEADER.pack(MAGIC, N, n) + np.ascontiguousarray(X, dtype="<f8").tobytes()


def decode_ecf(data):
    if len(data) < _HEADER.size:
        raise EcfError(f"truncated header: {len(data)} bytes, need {_HEADER.size}")
    magic, N, n = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise EcfError(f"bad magic {magic!r}, expected {MAGIC!r}")
    expected = 8 * N * n
    payload = len(data) - _HEADER.size
    if payload < expected:
        raise EcfError(f"truncated payload: {payload} bytes, header promises {expected}")
    if payload > expected:
        raise EcfError(f"trailing data: {payload - expected} bytes after payload")
    X = np.frombuffer(data, dtype="<f8", count=N * n, offset=_HEADER.size).reshape(N, n)
    if not np.all(np.isfinite(X)):
        raise EcfError("payload contains non-finite values")
    return X.astype(np.float64)


def write_ecf(path, cloud):
    with open(path, "wb") as fh:
        fh.write(encode_ecf(cloud))


def read_ecf(path):
    with open(path, "rb") as fh:
        return decode_ecf(fh.read())


def _is_number(field):
    try:
        float(field)
    except ValueError:
        return False
    return True


def read_csv(path):
    """Read a numeric CSV (optional header row) into an ``(N, n)`` array."""
    rows = []
    width = None
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not f.strip() for f in row):
                continue
            if not rows and width is None and not all(_is_number(f) for f in row):
                if any(_is_number(f) for f in row):
                    raise EcfError(f"line {lineno}: non-numeric field")
                width = len(row)  # header
                continue
            if width is None:
                width = len(row)
            if len(row) != width:
                raise EcfError(f"line {lineno}: expected {width} fields, got {len(row)}")
            try:
                values = [float(f) for f in row]
            except ValueError:
                raise EcfError(f"line {lineno}: non-numeric field") from None
            if not all(math.isfinite(v) for v in values):
                raise EcfError(f"line {lineno}: non-finite value")
            rows.append(values)
    if not rows:
        raise EcfError("no data rows")
    return np.array(rows, dtype=np.float64)


def write_csv(path, cloud, header=None):
    X = np.asarray(cloud, dtype=np.float64)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if header:
            w.writerow(header)
        for row in X:
            w.writerow([format(v, ".17g") for v in row])


def report_to_dict(report, seeds=None, timings_ms=None):
    d = report.to_dict()
    d = {"schema_version": REPORT_SCHEMA_VERSION, **d}
    est = report.alignment
    if est is not None:
        n = est.rotation.shape[0]
        d["alignment"] = {
            "alpha_e": est.scale,
            "d_e": est.translation.tolist(),
            "rotation_frobenius_from_identity": float(np.linalg.norm(est.rotation - np.eye(n))),
        }
    d["seeds"] = seeds or {}
    d["timings_ms"] = timings_ms or {}
    return d


def validate_report(d):
    if d.get("schema_version") != REPORT_SCHEMA_VERSION:
        raise ValueError(f"unsupported report schema {d.get('schema_version')!r}")
    expected = "stolen" if d["p_value"] <= d["threshold"] else "not-proven"
    if d["verdict"] != expected:
        raise ValueError("verdict is inconsistent with p_value and threshold")
    return d


def dump_report(d, fh):
    json.dump(d, fh, indent=2)
    fh.write("\n")


def load_report(path):
    with open(path) as fh:
        return validate_report(json.load(fh))
