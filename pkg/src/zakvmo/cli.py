"""Command-line front end: experiment configuration, demo pipelines, and
report/plot-data emission.

Subcommands: zak, analyze, riesz, invariance, vmo, metaplectic,
uncertainty, proptest, demo.  Configuration is a flat JSON file whose
rational parameters are written as "p/q" strings so exactness survives
serialization; identical config + seed produce byte-identical outputs.

Exit codes: 0 ok, 1 property failure, 2 config error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import os
import sys
import tempfile
from fractions import Fraction

import numpy as np

from . import gabor, metaplectic, uncertainty, vmo, zak
from .core import GridError, sample_function
from .symplectic import (
    GeneratorStep,
    RationalMatrix2,
    format_fraction,
    lattice_reduce,
    random_sl2,
    sl2_factorize,
    steps_matrix,
)

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class ConfigError(ValueError):
    pass


DEFAULT_CONFIG = {
    "recipe": "gaussian",
    "box": [0.0, 1.0],
    "support": [-8, 8],
    "S": 64,
    "nx": 64,
    "nw": 64,
    "lattice": {"P": 1, "Q": 1},
    "shift": ["1/2", "0"],
    "tol": 1e-6,
    "eps_list": [0.0625, 0.015625, 0.00390625],
    "vmo_floor": 0.1,
    "window": [0.0, 1.0, 0.0, 1.0],
    "alpha": "3/2",
    "chirp_m": 1,
    "radii": [1, 2, 4, 8],
    "exponents": [2.0, 2.0],
}


def load_config(path: str | None, overrides: dict) -> dict:
    cfg = dict(DEFAULT_CONFIG)
    if path:
        try:
            with open(path) as fh:
                cfg.update(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}")
    cfg.update({k: v for k, v in overrides.items() if v is not None})
    return cfg


def config_hash(cfg: dict) -> str:
    text = json.dumps(cfg, sort_keys=True, default=str)
    return hashlib.sha256(text.encode()).hexdigest()[:12]


def parse_rational(text) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad rational {text!r}: {exc}")


def build_generator(cfg: dict):
    recipe = cfg["recipe"]
    if recipe == "box":
        a, b = cfg.get("box", [0.0, 1.0])
        recipe = ("box", float(a), float(b))
    try:
        return sample_function(recipe, tuple(cfg["support"]), int(cfg["S"]))
    except ValueError as exc:
        raise ConfigError(str(exc))


def build_lattice(cfg: dict):
    """Returns (lattice, reduction-or-None); a 'matrix' entry is reduced to
    separable form first, mirroring the rational-lattice setup."""
    if "matrix" in cfg and cfg["matrix"]:
        A = RationalMatrix2(*(parse_rational(t) for t in cfg["matrix"]))
        try:
            red = lattice_reduce(A)
        except ZeroDivisionError as exc:
            raise ConfigError(str(exc))
        return gabor.SeparableLattice(red.P, red.Q), red
    lat = cfg.get("lattice", {})
    try:
        return gabor.SeparableLattice(int(lat["P"]), int(lat["Q"])), None
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad lattice spec {lat!r}: {exc}")


def atomic_write(path: str, writer) -> None:
    """Write via temp file + rename; writer(fileobj) produces the content."""
    d = os.path.dirname(path) or "."
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            writer(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: str, obj: dict) -> None:
    atomic_write(path, lambda fh: fh.write(json.dumps(obj, sort_keys=True, indent=2) + "\n"))


def _out(cfg, args, name):
    return os.path.join(args.out, name)


def cmd_zak(cfg: dict, args) -> int:
    g = build_generator(cfg)
    nx, nw = int(cfg["nx"]), int(cfg["nw"])
    h = config_hash(cfg)
    Z = zak.zak_transform(g, nx, nw)
    atomic_write(_out(cfg, args, "zak.csv"), lambda fh: zak.zak_to_csv(Z, fh, h))
    rep = zak.check_zak_identities(g, nx, nw)
    write_json(
        _out(cfg, args, "zak_identities.json"),
        {"schema": 1, "config": h, "deviations": rep.as_dict(),
         "unitarity_gap": abs(zak.zak_l2_norm(Z) - g.norm())},
    )
    print(f"zak: wrote zak.csv and zak_identities.json (config {h})")
    return EXIT_OK


def cmd_riesz(cfg: dict, args) -> int:
    g = build_generator(cfg)
    lat, red = build_lattice(cfg)
    rep = gabor.riesz_bounds(g, lat, int(cfg["nx"]), int(cfg["nw"]))
    h = config_hash(cfg)
    body = rep.as_dict()
    body["config"] = h
    if red is not None:
        body["reduction"] = {
            "B": red.B.to_csv(), "P": red.P, "Q": red.Q,
            "column_flipped": red.column_flipped,
        }
    write_json(_out(cfg, args, "riesz.json"), body)
    atomic_write(_out(cfg, args, "riesz_profile.csv"), lambda fh: rep.profile_to_csv(fh, h))
    print(f"riesz: A={rep.a_est:.6g} B={rep.b_est:.6g}")
    return EXIT_OK


def cmd_invariance(cfg: dict, args) -> int:
    g = build_generator(cfg)
    lat, _ = build_lattice(cfg)
    u, eta = (parse_rational(t) for t in cfg["shift"])
    rep = gabor.invariance_solve(
        g, lat, u, eta, int(cfg["nx"]), int(cfg["nw"]), float(cfg["tol"])
    )
    body = rep.as_dict()
    body["config"] = config_hash(cfg)
    write_json(_out(cfg, args, "invariance.json"), body)
    print(f"invariance: residual={rep.max_residual:.3g} verdict={rep.verdict}")
    return EXIT_OK


def cmd_vmo(cfg: dict, args) -> int:
    g = build_generator(cfg)
    Z = zak.zak_transform(g, int(cfg["nx"]), int(cfg["nw"]))
    F = vmo.field_from_zak(Z)
    rep = vmo.vmo_decay_profile(
        F, tuple(cfg["window"]), list(cfg["eps_list"]), float(cfg["vmo_floor"])
    )
    h = config_hash(cfg)
    atomic_write(_out(cfg, args, "vmo_profile.csv"), lambda fh: rep.to_csv(fh, h))
    body = rep.as_dict()
    body["config"] = h
    write_json(_out(cfg, args, "vmo_witness.json"), body)
    print(f"vmo: verdict={rep.verdict} tail S={rep.s_values[-1]:.4g}")
    return EXIT_OK


def cmd_analyze(cfg: dict, args) -> int:
    """Reduce the lattice, transport the generator metaplectically, then run
    the Riesz / invariance / oscillation-profile pipeline on the result."""
    g = build_generator(cfg)
    lat, red = build_lattice(cfg)
    h = config_hash(cfg)
    log = {"schema": 1, "config": h}
    u, eta = (parse_rational(t) for t in cfg["shift"])
    if red is not None:
        steps = []
        if red.B != RationalMatrix2.identity():
            chain = metaplectic.MetaplecticChain.for_matrix(red.B)
            need = metaplectic.minimal_sample_multiple(chain.steps)
            if g.samples_per_unit % need:
                raise ConfigError(
                    f"S = {g.samples_per_unit} must be a multiple of {need} for this matrix"
                )
            g = metaplectic.apply_metaplectic(chain, g)
            u, eta = red.B.apply((u, eta))  # transport the shift with the lattice
            steps = [s.as_dict() for s in chain.steps]
        log["reduction"] = {
            "B": red.B.to_csv(), "P": red.P, "Q": red.Q,
            "column_flipped": red.column_flipped,
            "shift_image": [format_fraction(u), format_fraction(eta)],
            "steps": steps,
        }
        write_json(_out(cfg, args, "summary.json"), log)  # reduction log first
    nx, nw = int(cfg["nx"]), int(cfg["nw"])
    if g.samples_per_unit % nx:
        raise ConfigError(f"nx = {nx} does not divide S = {g.samples_per_unit}")
    riesz_rep = gabor.riesz_bounds(g, lat, nx, nw)
    body = riesz_rep.as_dict()
    body["config"] = h
    write_json(_out(cfg, args, "riesz.json"), body)
    inv_rep = gabor.invariance_solve(g, lat, u, eta, nx, nw, float(cfg["tol"]))
    inv_body = inv_rep.as_dict()
    inv_body["config"] = h
    write_json(_out(cfg, args, "invariance.json"), inv_body)

    Z = zak.zak_transform(g, nx, nw)
    F = vmo.field_from_zak(Z)
    prof = vmo.vmo_decay_profile(
        F, tuple(cfg["window"]), list(cfg["eps_list"]), float(cfg["vmo_floor"])
    )
    atomic_write(_out(cfg, args, "vmo_profile.csv"), lambda fh: prof.to_csv(fh, h))

    log["riesz"] = {"a_est": riesz_rep.a_est, "b_est": riesz_rep.b_est}
    log["invariance"] = {"max_residual": inv_rep.max_residual, "verdict": inv_rep.verdict}
    log["vmo_profile"] = prof.as_dict()
    is_riesz = riesz_rep.a_est > 1e-9
    log["summary"] = {
        "riesz_sequence": is_riesz,
        "extra_invariance": inv_rep.verdict,
        "zak_vmo_profile": prof.verdict,
        "reading": (
            "Riesz sequence with an additional invariance: the oscillation "
            "profile must not decay (generator cannot be well-localized)"
            if is_riesz and inv_rep.verdict == "invariant"
            else "no obstruction triggered on this configuration"
        ),
    }
    write_json(_out(cfg, args, "summary.json"), log)
    print(
        f"analyze: riesz A={riesz_rep.a_est:.4g}, invariance={inv_rep.verdict}, "
        f"profile={prof.verdict}"
    )
    return EXIT_OK


def cmd_metaplectic(cfg: dict, args) -> int:
    g = build_generator(cfg)
    alpha = parse_rational(cfg["alpha"])
    m = int(cfg["chirp_m"])
    rep = metaplectic.check_zak_formulas(g, alpha, m)
    if "matrix" in cfg and cfg["matrix"]:
        S = RationalMatrix2(*(parse_rational(t) for t in cfg["matrix"]))
    else:
        S = RationalMatrix2(0, 1, -1, 0)
    steps = sl2_factorize(S)
    body = {
        "schema": 1,
        "config": config_hash(cfg),
        "zak_formula_deviations": rep.as_dict(),
        "factorization": {"matrix": S.to_csv(), "steps": [s.as_dict() for s in steps]},
    }
    write_json(_out(cfg, args, "metaplectic.json"), body)
    print(
        f"metaplectic: fourier={rep.dev_fourier:.2e} dilation={rep.dev_dilation:.2e} "
        f"chirp={rep.dev_chirp:.2e}"
    )
    return EXIT_OK


def cmd_uncertainty(cfg: dict, args) -> int:
    g = build_generator(cfg)
    q, p = (float(e) for e in cfg["exponents"])
    radii = list(cfg["radii"])
    h = config_hash(cfg)
    t_sweep, f_sweep = uncertainty.uncertainty_product(g, p, q, 0.0, 0.0, radii)
    gag = uncertainty.gagliardo_seminorm(g, 0.5, radii)
    feich = uncertainty.feichtinger_norm_estimate(
        g, radii=tuple(r for r in radii if r <= g.samples_per_unit / 4) or (2, 4)
    )
    atomic_write(_out(cfg, args, "moment_time.csv"), lambda fh: t_sweep.to_csv(fh, h))
    atomic_write(_out(cfg, args, "moment_freq.csv"), lambda fh: f_sweep.to_csv(fh, h))
    atomic_write(_out(cfg, args, "gagliardo.csv"), lambda fh: gag.to_csv(fh, h))
    atomic_write(_out(cfg, args, "feichtinger.csv"), lambda fh: feich.to_csv(fh, h))
    write_json(
        _out(cfg, args, "uncertainty.json"),
        {
            "schema": 1,
            "config": h,
            "time_moment": t_sweep.as_dict(),
            "freq_moment": f_sweep.as_dict(),
            "gagliardo_half": gag.as_dict(),
            "feichtinger": feich.as_dict(),
            "product_divergent": not (t_sweep.converged and f_sweep.converged),
        },
    )
    print(
        f"uncertainty: time={'conv' if t_sweep.converged else 'div'} "
        f"freq={'conv' if f_sweep.converged else 'div'}"
    )
    return EXIT_OK


def cmd_demo(cfg: dict, args) -> int:
    """End-to-end obstruction demo on the unit box at the integer lattice."""
    S = 32
    g = sample_function("box", (0, 1), S)
    lat = gabor.SeparableLattice(1, 1)
    riesz_rep = gabor.riesz_bounds(g, lat, S, S)
    print(f"riesz bounds of the box on Z x Z: A = {riesz_rep.a_est:.3f}, B = {riesz_rep.b_est:.3f}")
    u = Fraction(1, 2)
    rep = gabor.invariance_solve(g, lat, u, 0, S, S)
    print(f"shift (1/2, 0): residual = {rep.max_residual:.2e} -> {rep.verdict}")
    mres = gabor.m_matrix(rep.f_field, lat, 0)
    Z = zak.zak_transform(g, S, S)
    fr = gabor.fertig_residual(Z, lat, u, 0, mres)
    print(f"transfer-matrix identity residual = {fr:.2e}")
    prod = gabor.product_relation_residual(
        vmo.ScalarField2D(0, 0, 1 / S, 1 / S, rep.f_field.entries[0, 0], "periodic"),
        u, 0, 2, 0, -1,
    )
    print(f"2-step product equals exp(-2 pi i w): residual = {prod:.2e}")
    ok = gabor.divisibility_check(1, 1, 2, 0, -1)
    print(f"divisibility certificate for (M1, M2) = (0, -1): {ok} "
          f"(the failed certificate is the obstruction: (1/2, 0) is not a lattice point)")
    F = vmo.field_from_zak(Z)
    prof = vmo.vmo_decay_profile(F, (0.75, 1.25, 0.0, 1.0), [1 / 16, 1 / 64], floor=0.1)
    print(f"oscillation near the support jump: S = {prof.s_values} -> {prof.verdict}")
    if args.out:
        write_json(
            _out(cfg, args, "demo.json"),
            {
                "schema": 1,
                "riesz": {"a_est": riesz_rep.a_est, "b_est": riesz_rep.b_est},
                "residual": rep.max_residual,
                "verdict": rep.verdict,
                "divisibility": ok,
                "vmo": prof.as_dict(),
            },
        )
    return EXIT_OK


def _suite_vmo_inequalities(seed: int, cases: int) -> bool:
    rng = np.random.default_rng(seed)
    F = vmo.random_trig_field(rng, 96, 96, degree=3)
    G = vmo.random_trig_field(rng, 96, 96, degree=3)
    rep = vmo.check_inequalities(F, G, (0, 1, 0, 1), eps=0.01, n_cases=cases, rng=rng)
    F2 = vmo.random_trig_field(rng, 96, 96, degree=3, scale=0.2, offset=2.0)
    rep2 = vmo.check_inequalities(F2, G, (0, 1, 0, 1), eps=0.01, n_cases=cases, rng=rng)
    ok = rep.passed() and rep2.passed()
    for name, r in {**rep.results, **rep2.results}.items():
        status = "ok" if (not r.precondition_ok or r.max_ratio <= 1.001) else "FAIL"
        print(f"  {name:22s} max_ratio={r.max_ratio:.4f} cases={r.cases} [{status}]")
    return ok


def _suite_sl2(seed: int, cases: int) -> bool:
    rng = np.random.default_rng(seed)
    max_den = 0
    for _ in range(cases):
        S = random_sl2(rng)
        steps = sl2_factorize(S)
        if steps_matrix(steps) != S:
            print(f"  factorization mismatch for {S}")
            return False
        max_den = max(max_den, *(st.param.denominator for st in steps if st.param is not None))
    print(f"  {cases} exact factorizations, max parameter denominator {max_den}")
    return True


def _suite_pi_commutation(seed: int, cases: int) -> bool:
    from .core import inner_product, tf_shift

    rng = np.random.default_rng(seed)
    g = sample_function("gaussian", (-8, 8), 64)
    worst = 0.0
    for _ in range(cases):
        a, c = rng.integers(-64, 65, size=2) / 64
        b, d = rng.standard_normal(2)
        lhs = tf_shift(tf_shift(g, (c, d)), (a, b))
        rhs = tf_shift(g, (a + c, b + d))
        phase = np.exp(-2j * np.pi * a * d)
        j0 = min(lhs.j_min, rhs.j_min)
        j1 = max(lhs.k_max * 64, rhs.k_max * 64)
        va = np.zeros(j1 - j0, complex)
        vb = np.zeros(j1 - j0, complex)
        va[lhs.j_min - j0 : lhs.j_min - j0 + len(lhs.values)] = lhs.values
        vb[rhs.j_min - j0 : rhs.j_min - j0 + len(rhs.values)] = rhs.values
        worst = max(worst, float(np.max(np.abs(va - phase * vb))))
    print(f"  worst commutation deviation {worst:.3e}")
    return worst < 1e-10


def _suite_metaplectic(seed: int, cases: int) -> bool:
    rng = np.random.default_rng(seed)
    g = sample_function("gaussian", (-8, 8), 64)
    gens = [
        RationalMatrix2(0, 1, -1, 0),
        RationalMatrix2(2, 0, 0, Fraction(1, 2)),
        RationalMatrix2(1, 0, 1, 1),
        RationalMatrix2(1, 0, Fraction(-1, 2), 1),
    ]
    worst = 0.0
    for _ in range(cases):
        S = gens[rng.integers(len(gens))]
        lam = (Fraction(int(rng.integers(-8, 9)), 2), Fraction(int(rng.integers(-8, 9)), 2))
        chain = metaplectic.MetaplecticChain.for_matrix(S)
        worst = max(worst, metaplectic.covariance_residual(chain, lam, g))
    print(f"  worst covariance residual {worst:.3e}")
    return worst < 1e-5


PROPTEST_SUITES = {
    "vmo-inequalities": _suite_vmo_inequalities,
    "sl2-factorize": _suite_sl2,
    "pi-commutation": _suite_pi_commutation,
    "metaplectic-covariance": _suite_metaplectic,
}


def cmd_proptest(cfg: dict, args) -> int:
    suite = PROPTEST_SUITES.get(args.suite)
    if suite is None:
        print(f"unknown suite {args.suite!r}; choose from {sorted(PROPTEST_SUITES)}",
              file=sys.stderr)
        return EXIT_CONFIG
    print(f"suite {args.suite} (seed={args.seed}, cases={args.cases})")
    ok = suite(args.seed, args.cases)
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_PROPERTY


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="zakvmo",
        description="Zak / Gabor / VMO analysis pipelines",
    )
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--tol", type=float, default=None)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("zak", "analyze", "riesz", "invariance", "vmo", "metaplectic",
                 "uncertainty", "demo"):
        sub.add_parser(name)
    pt = sub.add_parser("proptest")
    pt.add_argument("suite")
    pt.add_argument("--cases", type=int, default=1000)
    args = parser.parse_args(argv)
    # re-attach shared flags for subcommand handlers
    if not hasattr(args, "cases"):
        args.cases = 1000

    handlers = {
        "zak": cmd_zak,
        "analyze": cmd_analyze,
        "riesz": cmd_riesz,
        "invariance": cmd_invariance,
        "vmo": cmd_vmo,
        "metaplectic": cmd_metaplectic,
        "uncertainty": cmd_uncertainty,
        "demo": cmd_demo,
    }
    try:
        cfg = load_config(args.config, {"tol": args.tol, "seed": args.seed})
        if args.command == "proptest":
            return cmd_proptest(cfg, args)
        return handlers[args.command](cfg, args)
    except (ConfigError, GridError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (gabor.RieszFailureError, zak.AliasingError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
