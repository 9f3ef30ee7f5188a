"""Command-line front end.

Every subcommand writes one machine-readable table (CSV with a header row, or
JSON) to ``--out`` (``-`` for stdout).  Exit status: 0 on success, 2 for bad
arguments or parameters outside a quantity's regime, 3 when a rejection
sampler runs out of attempts.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import covariance, moments, report, stats
from .errors import ConfigError, DepthModError, SamplingBudgetError
from .treegen import OffspringDistribution

MODELS = ("rrt", "bst", "cgwt")


@dataclass
class RunConfig:
    subcommand: str
    model: str
    m: Optional[int] = None
    n: Optional[int] = None
    n_grid: Optional[tuple] = None
    replicates: int = 1000
    seed: int = 0
    offspring: Optional[str] = None
    fmt: str = "csv"
    out: str = "-"
    threads: int = 1
    scaling: Optional[str] = None
    max_degree: int = 3
    m_from: Optional[int] = None
    m_to: Optional[int] = None
    sigma2: Optional[str] = None
    tol: float = 1e-12
    min_n: float = stats.MIN_FIT_N

    def validate(self) -> "RunConfig":
        """Check everything that can be checked before any work starts."""
        def need_int(name, lo):
            v = getattr(self, name)
            if v is None or v < lo:
                raise ConfigError(f"--{name.replace('_', '-')} must be an integer >= {lo}")

        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.fmt!r}")
        if self.threads < 1:
            raise ConfigError("--threads must be at least 1")
        if self.subcommand in ("moments", "oscillation") and self.model not in ("rrt", "bst"):
            raise ConfigError(f"{self.subcommand} is only defined for rrt and bst")
        if self.offspring is not None:
            if not self.model.startswith("cgwt"):
                raise ConfigError("--offspring only applies to --model cgwt")
            OffspringDistribution.from_name(self.offspring)
        if self.subcommand == "oscillation":
            need_int("m_from", 2)
            need_int("m_to", self.m_from)
            return self
        need_int("m", 2)
        if self.subcommand == "simulate":
            need_int("n", 1)
            need_int("replicates", 1)
            if self.scaling is not None and self.scaling not in stats.SCALINGS:
                raise ConfigError(f"unknown scaling {self.scaling!r}; choose from {stats.SCALINGS}")
        elif self.subcommand == "scaling":
            need_int("replicates", 2)
            if not self.n_grid:
                raise ConfigError("--n-grid is required")
            if min(self.n_grid) < 1:
                raise ConfigError("--n-grid sizes must be positive")
        elif self.subcommand == "moments":
            need_int("max_degree", 1)
        return self


def _parse_grid(text):
    try:
        return tuple(int(float(v)) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="depthmod", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp, models):
        sp.add_argument("--model", required=True, choices=models)
        sp.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", default="-", help="output path, '-' for stdout")

    sp = sub.add_parser("simulate", help="Monte Carlo mean and scaled covariance of the counts")
    common(sp, MODELS)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=lambda s: int(float(s)), required=True)
    sp.add_argument("--reps", dest="replicates", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--offspring", help="poisson1, geometric-half, binomial2-half, twopoint-0-2 or custom:p0,p1,...")
    sp.add_argument("--scaling", choices=stats.SCALINGS, help="defaults to the regime's scaling")
    sp.add_argument("--threads", type=int, default=1)

    sp = sub.add_parser("covariance", help="exact limit covariance matrix")
    common(sp, MODELS + ("bst-external",))
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--sigma2", help="offspring variance for cgwt (rational, e.g. 1 or 3/2)")

    sp = sub.add_parser("moments", help="joint moments of the fixed-point limits")
    common(sp, ("rrt", "bst"))
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--max-degree", type=int, default=3)

    sp = sub.add_parser("oscillation", help="oscillation verdicts over a range of m")
    common(sp, ("rrt", "bst"))
    sp.add_argument("--m-from", type=int, required=True)
    sp.add_argument("--m-to", type=int, required=True)
    sp.add_argument("--tol", type=float, default=1e-12)

    sp = sub.add_parser("scaling", help="variance of X_0 over a size grid and its fitted exponent")
    common(sp, MODELS)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n-grid", type=_parse_grid, required=True, help="comma-separated sizes")
    sp.add_argument("--reps", dest="replicates", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--offspring")
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--min-n", type=float, default=stats.MIN_FIT_N)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__}
    return RunConfig(**fields).validate()


def _model_arg(cfg):
    if cfg.model == "cgwt":
        return stats._as_model("cgwt", cfg.offspring or "poisson1")
    return stats._as_model(cfg.model)


# -- subcommands -------------------------------------------------------------

def cmd_simulate(cfg: RunConfig) -> str:
    model = _model_arg(cfg)
    expected = stats.default_scaling(model, cfg.m)
    scaling = cfg.scaling or expected
    if scaling != expected:
        regime, _ = stats.regime_of(model, cfg.m)
        raise ConfigError(
            f"scaling {scaling!r} does not match the {regime.value} regime of "
            f"{stats.model_label(model)} with m={cfg.m} (use {expected!r})"
        )
    if scaling == stats.SQRT_N_LOG_N and cfg.n < 2:
        raise ConfigError("n log n scaling needs n >= 2")
    norm = stats.scaling_norm(scaling, cfg.n, model.kind, cfg.m)
    counts = stats.simulate_counts(model, cfg.m, cfg.n, cfg.replicates, cfg.seed, cfg.threads)
    s = stats.summarize_counts(counts, stats.model_label(model), cfg.m, cfg.n, cfg.seed, scaling, norm)
    return report.summary_to_json(s) if cfg.fmt == "json" else report.summary_to_csv(s)


def cmd_covariance(cfg: RunConfig) -> str:
    if cfg.sigma2 is not None and cfg.model != "cgwt":
        raise ConfigError("--sigma2 only applies to --model cgwt")
    if cfg.model == "cgwt":
        try:
            s2 = Fraction(cfg.sigma2) if cfg.sigma2 is not None else Fraction(1)
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"bad --sigma2 {cfg.sigma2!r}") from None
        cov = covariance.cgwt_sigma(cfg.m, s2)
    else:
        cov = covariance.limit_sigma(cfg.model, cfg.m)
    exact = cov.entry_strings()
    mat = cov.matrix()
    if cfg.fmt == "json":
        return report.write_json({
            "model": cov.model, "m": cov.m, "scale": cov.scale,
            "sigma2": str(cov.sigma2) if cov.sigma2 is not None else None,
            "first_row": exact, "denominator": cov.denominator(), "matrix": mat,
        })
    rows = ((cov.model, cov.m, cov.scale, i, j, exact[(j - i) % cov.m], mat[i, j])
            for i in range(cov.m) for j in range(cov.m))
    return report.write_csv(("model", "m", "scale", "i", "j", "exact", "value"), rows)


def cmd_moments(cfg: RunConfig) -> str:
    t = moments.zhat_moments(cfg.model, cfg.m, cfg.max_degree)
    keys = sorted(t.entries, key=lambda ab: (ab[0] + ab[1], -ab[0]))
    rows = []
    for var, table in (("Z", t.entries), ("Zhat", t.hat_entries)):
        for a, b in keys:
            v = table[(a, b)]
            rows.append((var, a, b, v.real, v.imag))
    if cfg.fmt == "json":
        return report.write_json({
            "model": t.model, "m": t.m, "max_degree": t.max_degree,
            "moments": [dict(zip(("variable", "a", "b", "re", "im"), r)) for r in rows],
        })
    return report.write_csv(("variable", "a", "b", "re", "im"), rows)


def cmd_oscillation(cfg: RunConfig) -> str:
    reports = [moments.oscillation_check(cfg.model, m, cfg.tol) for m in range(cfg.m_from, cfg.m_to + 1)]
    if cfg.fmt == "json":
        return report.write_json([
            {"model": r.model, "m": r.m, "c2": r.c2, "c11": r.c11, "c3": r.c3, "oscillates": r.oscillates}
            for r in reports
        ])
    rows = ((r.model, r.m, r.c2.real, r.c2.imag, r.c11, r.c3.real, r.c3.imag,
             "oscillates=" + report.fmt(r.oscillates)) for r in reports)
    return report.write_csv(("model", "m", "c2_re", "c2_im", "c11", "c3_re", "c3_im", "verdict"), rows)


def cmd_scaling(cfg: RunConfig) -> str:
    model = _model_arg(cfg)
    fit = stats.variance_scaling(model, cfg.m, list(cfg.n_grid), cfg.replicates, cfg.seed,
                                 cfg.threads, min_n=cfg.min_n)
    label = stats.model_label(model)
    if cfg.fmt == "json":
        return report.write_json({
            "model": label, "m": cfg.m, "replicates": cfg.replicates, "seed": cfg.seed,
            "ns": fit.ns, "variances": fit.variances, "variance_se": fit.variance_se,
            "gamma_hat": fit.gamma_hat, "r2": fit.r2,
        })
    rows = ((label, cfg.m, int(n), v, se, fit.gamma_hat, fit.r2)
            for n, v, se in zip(fit.ns, fit.variances, fit.variance_se))
    return report.write_csv(("model", "m", "n", "variance", "variance_se", "gamma_hat", "r2"), rows)


COMMANDS = {
    "simulate": cmd_simulate,
    "covariance": cmd_covariance,
    "moments": cmd_moments,
    "oscillation": cmd_oscillation,
    "scaling": cmd_scaling,
}


def _emit(text, out):
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)  # exits 2 on usage errors
    try:
        cfg = config_from_args(ns)
        text = COMMANDS[cfg.subcommand](cfg)
        _emit(text, cfg.out)
    except SamplingBudgetError as exc:
        print(f"depthmod: sampling failed: {exc}", file=sys.stderr)
        return 3
    except DepthModError as exc:
        print(f"depthmod: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"depthmod: cannot write output: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
