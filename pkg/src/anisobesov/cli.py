"""Command-line front end: ``anisobesov <command> [options]``.

Commands
--------
rate-scan        fit the decay of lower-bound witnesses against the class rate
norm             block norm and modulus-of-smoothness norm of one field
extremal-verify  quadrature norms of F_k against analytic bounds and slope
nikolskii        randomized different-metrics inequality suite
decompose        write the a-layering of a field to disk

Options may also come from ``--config file.json``; flags win over the file.
Exit status is 0 on success, 2 on invalid input and 3 when a numerical
guard (Nyquist, residual, noise floor) refuses to produce a result.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from anisobesov.anisotropy import AnisotropyProfile, make_profile
from anisobesov.approx import nikolskii_check, random_band_limited, rate_scan
from anisobesov.besov import BesovParams, block_norm, definition_norm
from anisobesov.exceptions import DomainError, NumericalGuardError
from anisobesov.extremal import F_k_norm_bounds, build_F_k, build_g1, conjugate
from anisobesov.field import GridSpec, SampledField, check_exponent, lp_norm, sample, tail_estimate
from anisobesov.io import load_field, save_layer_stack, write_rate_report
from anisobesov.spectral import layer_decompose, max_layer

logger = logging.getLogger("anisobesov")

COMMANDS = ("rate-scan", "norm", "extremal-verify", "nikolskii", "decompose")
DEFAULT_SEED = 20240101
DEFAULT_SAMPLES = {1: 2**14, 2: 2**10, 3: 2**6}
NIKOLSKII_PAIRS = ((1.5, 2.0), (2.0, 4.0), (2.0, math.inf), (1.5, math.inf))

EXIT_OK, EXIT_INVALID, EXIT_GUARD = 0, 2, 3


def parse_range(text) -> list[int]:
    """``"2..6"`` -> [2, 3, 4, 5, 6]; ``"1,3,5"`` and lists are also accepted."""
    if isinstance(text, (list, tuple)):
        return [int(v) for v in text]
    text = str(text).strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise DomainError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [int(v) for v in text.split(",") if v.strip()]


def parse_vector(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    if isinstance(text, (int, float)):
        return [float(text)]
    return [float(v) for v in str(text).replace(" ", ",").split(",") if v.strip()]


def _exponent_or_inf(value) -> float:
    if isinstance(value, str) and value.strip().lower() in {"inf", "infinity"}:
        return math.inf
    return float(value)


@dataclass
class ExperimentConfig:
    command: str
    r: list[float] = field(default_factory=lambda: [1.0])
    p: float = 2.0
    q: float = 2.0
    theta: float = 1.0
    n_range: list[int] = field(default_factory=lambda: [2, 3, 4, 5, 6])
    k_range: list[int] = field(default_factory=lambda: [1, 2, 3, 4, 5])
    samples: list[int] | None = None
    half_width: list[float] | None = None
    oversample: float = 2.0
    output: str | None = None
    seed: int = DEFAULT_SEED
    d: int | None = None
    trials: int = 200
    input: str | None = None
    gaussian: float | None = None
    s_max: int | None = None

    @property
    def profile(self) -> AnisotropyProfile:
        return make_profile(self.r)

    def validate(self) -> "ExperimentConfig":
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}; choose from {', '.join(COMMANDS)}")
        self.r = parse_vector(self.r)
        if self.samples is not None:
            self.samples = [int(v) for v in parse_vector(self.samples)]
        if self.half_width is not None:
            self.half_width = parse_vector(self.half_width)
        self.n_range = parse_range(self.n_range)
        self.k_range = parse_range(self.k_range)
        prof = make_profile(self.r)
        self.p = _exponent_or_inf(self.p)
        self.q = _exponent_or_inf(self.q)
        self.theta = _exponent_or_inf(self.theta)
        check_exponent(self.p)
        if self.command == "rate-scan":
            check_exponent(self.q, name="q")
            if not (self.p < math.inf and self.q < math.inf and self.p <= self.q):
                raise DomainError(f"rate-scan needs 1 < p <= q < inf, got p = {self.p}, q = {self.q}")
            if len(self.n_range) < 3 or min(self.n_range) < 1:
                raise DomainError("rate-scan needs at least three values n >= 1")
        if self.command == "extremal-verify" and (len(self.k_range) < 2 or min(self.k_range) < 1):
            raise DomainError("extremal-verify needs at least two values k >= 1")
        if self.theta < 1:
            raise DomainError(f"theta = {self.theta} must be >= 1")
        if self.command == "nikolskii":
            if self.d is None:
                self.d = 1
            if self.d not in (1, 2) or self.trials < 1:
                raise DomainError("nikolskii needs d in {1, 2} and trials >= 1")
        elif self.d is not None and self.d != prof.d:
            raise DomainError(f"--d {self.d} disagrees with r of length {prof.d}")
        if self.command in ("norm", "decompose") and self.input is None and self.gaussian is None:
            raise DomainError(f"{self.command} needs --input FILE or --gaussian WIDTH")
        if self.oversample < 1:
            raise DomainError("oversample must be >= 1")
        return self

    def grid(self, profile: AnisotropyProfile, top_level: int) -> GridSpec:
        """Explicit grid if given, else one whose Nyquist frequency is
        ``oversample * a_j**top_level`` on each axis."""
        d = profile.d
        n = self.samples or [DEFAULT_SAMPLES[d]] * d
        if len(n) == 1:
            n = n * d
        if self.half_width:
            hw = self.half_width * d if len(self.half_width) == 1 else self.half_width
            return GridSpec(tuple(hw), tuple(n))
        hw = [math.pi * nj / (2 * self.oversample * aj**top_level) for nj, aj in zip(n, profile.a)]
        return GridSpec(tuple(hw), tuple(n))


def _gaussian_field(width: float, d: int, samples: list[int] | None) -> SampledField:
    n = (samples or [1024])[0]
    spec = GridSpec.uniform(d, 20.0 * width, n)
    return sample(lambda *xs: np.exp(-0.5 * sum(x * x for x in xs) / width**2), spec)


def _input_field(cfg: ExperimentConfig, d: int):
    if cfg.input is not None:
        return load_field(cfg.input)
    return _gaussian_field(cfg.gaussian, d, cfg.samples)


def _out_path(cfg: ExperimentConfig, default: str) -> Path:
    path = Path(cfg.output or default)
    if path.parent and not path.parent.exists():
        raise DomainError(f"output directory {path.parent} does not exist")
    return path


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        raise DomainError(f"cannot write {path}: {exc}") from exc


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _dumps(obj) -> str:
    """JSON text with infinite exponents spelled ``"inf"`` (valid JSON, and
    accepted back by ``--config``)."""

    def clean(v):
        if isinstance(v, float) and math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if isinstance(v, dict):
            return {k: clean(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [clean(x) for x in v]
        return v

    return json.dumps(clean(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def run_rate_scan(cfg: ExperimentConfig) -> str:
    prof = cfg.profile
    spec = cfg.grid(prof, max(cfg.n_range))
    report = rate_scan(lambda n: build_g1(prof, n, cfg.p, spec), prof, cfg.p, cfg.q, cfg.n_range)
    path = _out_path(cfg, "rate_scan.csv")
    try:
        write_rate_report(report, path)
    except OSError as exc:
        raise DomainError(f"cannot write {path}: {exc}") from exc
    return (
        f"rate-scan: fitted slope {report.fitted_slope:.4f} vs theoretical "
        f"{-report.theoretical_exponent:.4f} over {len(report.rows)} rows -> {path}"
    )


def run_norm(cfg: ExperimentConfig) -> str:
    prof = cfg.profile
    f = _input_field(cfg, prof.d)
    params = BesovParams(prof, cfg.p, cfg.theta, cfg.s_max)
    bn = block_norm(f, params)
    details = definition_norm(f, params, return_details=True)
    result = {
        "block_norm": bn,
        "definition_norm": details.value,
        "ratio": details.value / bn if bn else None,
        "lp_norm": details.base_norm,
        "axis_terms": list(details.axis_terms),
        "lower_tails": list(details.lower_tails),
        "upper_tails": list(details.upper_tails),
        "r": list(prof.r),
        "p": cfg.p,
        "theta": cfg.theta,
        "grid": f.spec.to_dict(),
    }
    path = _out_path(cfg, "norm.json")
    _write(path, _dumps(result))
    return f"norm: block {bn:.6g}, definition {details.value:.6g}, ratio {result['ratio']:.4f} -> {path}"


def run_extremal_verify(cfg: ExperimentConfig) -> str:
    prof = cfg.profile
    spec = cfg.grid(prof, max(cfg.k_range))
    p = cfg.p
    lines = ["k,norm,lower,upper,tail_estimate,within_bounds"]
    norms, ok = [], 0
    for k in cfg.k_range:
        F = build_F_k(prof, k, spec)
        val = lp_norm(F, p)
        lo, up = F_k_norm_bounds(prof, k, p)
        inside = lo * 0.95 <= val <= up * 1.05
        ok += inside
        norms.append(val)
        lines.append(f"{k},{_fmt(val)},{_fmt(lo)},{_fmt(up)},{_fmt(tail_estimate(F, p))},{int(inside)}")
    slope = float(np.polyfit(cfg.k_range, np.log2(norms), 1)[0])
    expected = prof.d / conjugate(p)
    path = _out_path(cfg, "extremal.csv")
    _write(path, "\n".join(lines) + "\n")
    sidecar = {"fitted_slope": slope, "expected_slope": expected, "p": p, "r": list(prof.r), "grid": spec.to_dict()}
    _write(path.with_suffix(".json"), _dumps(sidecar))
    return f"extremal-verify: slope {slope:.4f} vs d/p' {expected:.4f}; {ok}/{len(norms)} within bounds -> {path}"


def nikolskii_grid(d: int) -> GridSpec:
    return GridSpec.uniform(1, 50.0, 512) if d == 1 else GridSpec.uniform(2, 20.0, 128)


def run_nikolskii(cfg: ExperimentConfig) -> tuple[str, bool]:
    rng = np.random.default_rng(cfg.seed)
    spec = nikolskii_grid(cfg.d)
    # exponents go out as reciprocals so p2 = inf stays a finite number
    lines = ["trial,d,inv_p1,inv_p2,nu,lhs,rhs,ratio,pass"]
    passed = 0
    for trial in range(cfg.trials):
        p1, p2 = NIKOLSKII_PAIRS[trial % len(NIKOLSKII_PAIRS)]
        nu = rng.uniform(0.5, 4.0, size=cfg.d)
        g = random_band_limited(spec, nu, rng)
        res = nikolskii_check(g, nu, p1, p2)
        passed += res.passed
        nu_txt = ";".join(_fmt(v) for v in nu)
        lines.append(
            f"{trial},{cfg.d},{_fmt(1 / p1)},{_fmt(1 / p2)},{nu_txt},{_fmt(res.lhs)},{_fmt(res.rhs)},{_fmt(res.ratio)},{int(res.passed)}"
        )
    path = _out_path(cfg, "nikolskii.csv")
    _write(path, "\n".join(lines) + "\n")
    return f"nikolskii: {passed}/{cfg.trials} pass -> {path}", passed == cfg.trials


def run_decompose(cfg: ExperimentConfig) -> str:
    prof = cfg.profile
    f = _input_field(cfg, prof.d)
    s_max = cfg.s_max if cfg.s_max is not None else max_layer(prof, f.spec)
    stack = layer_decompose(f, prof, s_max)
    out = Path(cfg.output or "layers")
    try:
        save_layer_stack(stack, out)
    except OSError as exc:
        raise DomainError(f"cannot write {out}: {exc}") from exc
    lines = ["s,lp_norm"] + [f"{s},{_fmt(lp_norm(layer, cfg.p))}" for s, layer in enumerate(stack.layers)]
    _write(out / "layers.csv", "\n".join(lines) + "\n")
    resid = lp_norm(stack.residual, cfg.p)
    return f"decompose: {len(stack.layers)} layers, residual L_p norm {resid:.3g} -> {out}"


def execute(cfg: ExperimentConfig) -> int:
    """Validate and run one experiment; returns the process exit status."""
    try:
        cfg.validate()
        if cfg.command == "rate-scan":
            summary, ok = run_rate_scan(cfg), True
        elif cfg.command == "norm":
            summary, ok = run_norm(cfg), True
        elif cfg.command == "extremal-verify":
            summary, ok = run_extremal_verify(cfg), True
        elif cfg.command == "nikolskii":
            summary, ok = run_nikolskii(cfg)
        else:
            summary, ok = run_decompose(cfg), True
    except NumericalGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(summary)
    return EXIT_OK if ok else EXIT_GUARD


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="anisobesov", description=__doc__.split("\n\n")[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="JSON file with option values (flags override it)")
    parser.add_argument("--r", help="smoothness vector, e.g. 1 or 1,2")
    parser.add_argument("--p", help="integrability exponent p (or inf)")
    parser.add_argument("--q", help="error metric exponent q")
    parser.add_argument("--theta", help="Besov fine index theta (or inf)")
    parser.add_argument("--n", dest="n_range", help="levels n, e.g. 2..6")
    parser.add_argument("--k", dest="k_range", help="shell indices k, e.g. 1..5")
    parser.add_argument("--samples", help="grid samples per axis, e.g. 1024 or 4096,512")
    parser.add_argument("--half-width", dest="half_width", help="box half widths per axis")
    parser.add_argument("--oversample", type=float, help="Nyquist over the top box edge for automatic grids")
    parser.add_argument("--output", "-o", help="output file (directory for decompose)")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--d", type=int)
    parser.add_argument("--trials", type=int)
    parser.add_argument("--input", help="field file (JSON header + index,re,im CSV)")
    parser.add_argument("--gaussian", type=float, help="use exp(-|x|^2 / 2w^2) of this width as input")
    parser.add_argument("--s-max", dest="s_max", type=int)
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    values: dict = {}
    if args.config:
        try:
            values.update(json.loads(Path(args.config).read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError) as exc:
            raise DomainError(f"cannot read config {args.config}: {exc}") from exc
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(values) - known
    if unknown:
        raise DomainError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for name in known - {"command"}:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    for name in ("samples",):
        if isinstance(values.get(name), str):
            values[name] = [int(v) for v in parse_vector(values[name])]
    if isinstance(values.get("half_width"), str):
        values["half_width"] = parse_vector(values["half_width"])
    values["command"] = args.command
    return ExperimentConfig(**values)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = config_from_args(args)
    except (DomainError, TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return execute(cfg)


if __name__ == "__main__":
    sys.exit(main())
