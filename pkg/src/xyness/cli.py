"""Command-line front end.

Every subcommand writes a table (CSV with a header row, or a JSON array of
flat objects) or a single record (CSV with one row, or one flat JSON
object).  Numbers are written with 17 significant digits so that parsing
the output back reproduces the computed doubles exactly.

Exit codes: 0 ok, 2 configuration error, 3 numerical failure,
4 verification failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import correlation, model, oracle, szego, verify
from .model import ChainParams
from .quadrature import QuadratureError, QuadSpec

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_VERIFY = 0, 2, 3, 4

COLUMNS = {
    "compute": ("n", "p", "log10_p", "ratio_to_g_power"),
    "rates": ("gamma_l", "gamma_r", "gamma_b", "gamma_total", "ordered", "rewrite_error"),
    "symbol": ("k", "a", "a_prime", "s_minus_l", "s_minus_r", "transmission"),
    "oracle": ("n", "p_analytic", "p_oracle", "abs_diff", "max_imag", "spread"),
    "fit": ("n_max", "fitted_rate", "gamma_total", "relative_rate_error", "geometric_mean",
            "limit_estimate", "last_increment"),
    "verify": ("suite", "passed", "measured", "tolerance", "detail"),
}


class ConfigError(ValueError):
    """Invalid or unknown configuration value."""


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Validated run configuration (``ChainParams`` fields plus run settings)."""

    beta_left: float = 0.5
    beta_right: float = 2.0
    kappa: float = 0.2
    x0: int = 1
    sample_radius: int = 0
    n_max: int = 20
    quad_tol: float = 1e-12
    hankel_mode: str = szego.DEFAULT_HANKEL_MODE
    oracle_window: int = 300
    oracle_horizon: float = 150.0
    oracle_samples: int = 256
    grid_points: int = 513
    format: str | None = None
    out: str | None = None

    def params(self) -> ChainParams:
        return ChainParams(self.beta_left, self.beta_right, self.kappa, self.x0, self.sample_radius)

    def quad(self) -> QuadSpec:
        return QuadSpec(tol=self.quad_tol)

    def oracle_spec(self) -> oracle.FiniteVolumeSpec:
        return oracle.FiniteVolumeSpec(self.oracle_window, self.oracle_horizon, self.oracle_samples)

    def validate(self) -> "RunConfig":
        try:
            self.params()
            self.quad()
            self.oracle_spec()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if not 1 <= self.n_max <= 400:
            raise ConfigError(f"n_max must lie in 1..400, got {self.n_max}")
        if self.hankel_mode not in szego.HANKEL_MODES:
            raise ConfigError(f"hankel_mode must be one of {szego.HANKEL_MODES}, got {self.hankel_mode!r}")
        if self.format not in (None, "csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.grid_points < 2:
            raise ConfigError("grid_points must be >= 2")
        return self


FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}
_CASTS = {"float": float, "int": int, "str": str, "str | None": str}


def _cast(key: str, raw):
    kind = FIELDS[key].type
    try:
        if kind == "int":
            val = float(raw)
            if val != int(val):
                raise ValueError
            return int(val)
        return _CASTS[kind](raw)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: cannot interpret {raw!r} as {kind}") from None


def read_config_file(path) -> dict:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in FIELDS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _cast(key, val)
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then the config file, then explicit flags."""
    values = read_config_file(args.config) if args.config else {}
    for key in FIELDS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = _cast(key, v)
    return RunConfig(**values).validate()


# formatting

def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    return str(v)


def _json_value(v) -> str:
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (float, np.floating)) and not math.isfinite(float(v)):
        return json.dumps(fmt(v))
    return fmt(v)


def _csv_field(s: str) -> str:
    if any(ch in s for ch in ',"\n'):
        return '"' + s.replace('"', '""') + '"'
    return s


def render(rows: list[dict], columns, fmt_name: str, record: bool = False) -> str:
    """Serialize rows with a fixed column order."""
    if fmt_name == "csv":
        lines = [",".join(columns)]
        lines += [",".join(_csv_field(fmt(r[c])) for c in columns) for r in rows]
        return "\n".join(lines) + "\n"
    objs = ["{" + ", ".join(f"{json.dumps(c)}: {_json_value(r[c])}" for c in columns) + "}"
            for r in rows]
    if record and len(objs) == 1:
        return objs[0] + "\n"
    return "[\n" + ",\n".join("  " + o for o in objs) + "\n]\n"


def emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# commands

def cmd_compute(cfg: RunConfig) -> list[dict]:
    p, quad = cfg.params(), cfg.quad()
    logs = correlation.efp_sequence(cfg.n_max, p, quad)
    _, rate = szego.geometric_mean(model.toeplitz_symbol(p), quad)
    rows = []
    for n, ls in enumerate(logs, 1):
        lp = ls.log_magnitude
        rows.append({"n": n, "p": math.exp(lp), "log10_p": lp / math.log(10.0),
                     "ratio_to_g_power": math.exp(lp + n * rate)})
    return rows


def cmd_rates(cfg: RunConfig) -> list[dict]:
    r = szego.decay_rates(cfg.params(), cfg.quad())
    return [{"gamma_l": r.gamma_L, "gamma_r": r.gamma_R, "gamma_b": r.gamma_B,
             "gamma_total": r.gamma_total, "ordered": r.ordered, "rewrite_error": r.rewrite_error}]


def cmd_symbol(cfg: RunConfig) -> list[dict]:
    p = cfg.params()
    k = np.linspace(-math.pi, math.pi, cfg.grid_points)
    a = model.toeplitz_symbol(p)
    da = a.derivative(k) if a.derivative is not None else np.full_like(k, np.nan)
    sl = model.fermi(k, p, model.LEFT, -1)
    sr = model.fermi(k, p, model.RIGHT, -1)
    t = model.transmission(k, p.kappa)
    av = np.real(a(k))
    return [{"k": k[i], "a": av[i], "a_prime": da[i], "s_minus_l": sl[i],
             "s_minus_r": sr[i], "transmission": t[i]} for i in range(len(k))]


def cmd_oracle(cfg: RunConfig) -> list[dict]:
    p, quad, spec = cfg.params(), cfg.quad(), cfg.oracle_spec()
    spec.check(cfg.n_max, p)
    theta = correlation.assemble_theta(cfg.n_max, p, quad)
    rows = []
    for n in range(1, cfg.n_max + 1):
        exact = correlation.efp(n, p, quad, theta).value.real
        avg = oracle.time_average(n, spec, p)
        rows.append({"n": n, "p_analytic": exact, "p_oracle": avg.efp,
                     "abs_diff": abs(avg.efp - exact), "max_imag": avg.max_imag, "spread": avg.spread})
    return rows


def cmd_fit(cfg: RunConfig) -> list[dict]:
    prof = szego.asymptotic_profile(cfg.params(), cfg.n_max, cfg.quad())
    return [{"n_max": cfg.n_max, "fitted_rate": prof.fitted_rate, "gamma_total": prof.gamma_total,
             "relative_rate_error": abs(prof.fitted_rate - prof.gamma_total) / prof.gamma_total,
             "geometric_mean": prof.geometric_mean, "limit_estimate": prof.limit_estimate,
             "last_increment": float(prof.increments[-1]) if len(prof.increments) else math.nan}]


def cmd_verify(cfg: RunConfig) -> list[dict]:
    vc = verify.VerifyConfig(params=cfg.params(), quad=cfg.quad(), hankel_mode=cfg.hankel_mode,
                             n_max=cfg.n_max, oracle_spec=cfg.oracle_spec())
    return [r.as_dict() for r in verify.run_suites(vc)]


COMMANDS = {"compute": cmd_compute, "rates": cmd_rates, "symbol": cmd_symbol,
            "oracle": cmd_oracle, "fit": cmd_fit, "verify": cmd_verify}
RECORDS = {"rates", "fit"}

_EPILOG = "\n".join(f"  {name:8s}{', '.join(cols)}" for name, cols in COLUMNS.items())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xyness",
        description="EFP of the impurity XY chain in its nonequilibrium steady state.",
        epilog="output columns, in order:\n" + _EPILOG
        + "\n\nexit codes: 0 ok, 2 config error, 3 numerical failure, 4 verification failure",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("configuration (flags override --config)")
    g.add_argument("--config", help="flat key = value file with the keys below in snake_case")
    g.add_argument("--beta-left", dest="beta_left")
    g.add_argument("--beta-right", dest="beta_right")
    g.add_argument("--kappa")
    g.add_argument("--x0")
    g.add_argument("--sample-radius", dest="sample_radius")
    g.add_argument("--n-max", dest="n_max")
    g.add_argument("--quad-tol", dest="quad_tol")
    g.add_argument("--hankel-mode", dest="hankel_mode")
    g.add_argument("--oracle-window", dest="oracle_window")
    g.add_argument("--oracle-horizon", dest="oracle_horizon")
    g.add_argument("--oracle-samples", dest="oracle_samples")
    g.add_argument("--grid-points", dest="grid_points", help="symbol samples on [-pi, pi]")
    g.add_argument("--format", help="csv or json (default csv; json for verify)")
    g.add_argument("--out", help="output file (default stdout)")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "compute": "P(n) for n = 1..n_max with the ratio to G(a)^n",
        "rates": "decay rates gamma_L, gamma_R, gamma_B, total and the ordering verdict",
        "symbol": "samples of the Toeplitz symbol and its ingredients",
        "oracle": "finite-volume time average against the analytic P(n)",
        "fit": "fitted decay rate of -log P(n) over n in [60, 120]",
        "verify": "run all invariant suites",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text, description=text + ". Columns: "
                       + ", ".join(COLUMNS[name]))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        fmt_name = cfg.format or ("json" if args.command == "verify" else "csv")
        rows = COMMANDS[args.command](cfg)
    except (ConfigError, oracle.LightConeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, correlation.AssemblyError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    emit(render(rows, COLUMNS[args.command], fmt_name, record=args.command in RECORDS), cfg.out)
    if args.command == "verify":
        failed = [r["suite"] for r in rows if not r["passed"]]
        if failed:
            print("failed suites: " + ", ".join(failed), file=sys.stderr)
            return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
