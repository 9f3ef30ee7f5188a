"""Tabular (CSV / JSON) rendering of results, and parsing back of summaries."""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .stats import MonteCarloSummary

FLOAT_FMT = "{:.12g}"


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return FLOAT_FMT.format(float(x))
    return str(x)


def jsonable(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return float(FLOAT_FMT.format(x)) if math.isfinite(x) else None
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, complex):
        return {"re": jsonable(x.real), "im": jsonable(x.imag)}
    if isinstance(x, np.ndarray):
        return [jsonable(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, dict):
        return {k: jsonable(v) for k, v in x.items()}
    return x


def write_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_json(obj) -> str:
    return json.dumps(jsonable(obj), indent=2) + "\n"


# -- Monte Carlo summaries ---------------------------------------------------

_META = ("model", "m", "n", "replicates", "seed", "scaling")


def summary_rows(s: MonteCarloSummary):
    for key in _META:
        yield (key, "", "", getattr(s, key))
    for i, v in enumerate(s.mean):
        yield ("mean", i, "", float(v))
    for name, mat in (("cov", s.sample_cov), ("se", s.standard_errors)):
        for i in range(s.m):
            for j in range(s.m):
                yield (name, i, j, float(mat[i, j]))


def summary_to_csv(s: MonteCarloSummary) -> str:
    return write_csv(("field", "i", "j", "value"), summary_rows(s))


def summary_to_json(s: MonteCarloSummary) -> str:
    return write_json(
        {
            "model": s.model,
            "m": s.m,
            "n": s.n,
            "replicates": s.replicates,
            "seed": s.seed,
            "scaling": s.scaling,
            "mean": s.mean,
            "sample_cov": s.sample_cov,
            "standard_errors": s.standard_errors,
        }
    )


def read_summary_csv(text: str) -> MonteCarloSummary:
    rows = list(csv.DictReader(io.StringIO(text)))
    meta = {r["field"]: r["value"] for r in rows if r["field"] in _META}
    m = int(meta["m"])
    mean = np.zeros(m)
    cov = np.zeros((m, m))
    se = np.zeros((m, m))
    for r in rows:
        f = r["field"]
        if f == "mean":
            mean[int(r["i"])] = float(r["value"])
        elif f in ("cov", "se"):
            (cov if f == "cov" else se)[int(r["i"]), int(r["j"])] = float(r["value"])
    return MonteCarloSummary(meta["model"], m, int(meta["n"]), int(meta["replicates"]),
                             int(meta["seed"]), meta["scaling"], mean, cov, se)
