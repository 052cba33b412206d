"""Command-line front end.

    gradslip assemble --M 5 --chi 1.0
    gradslip slip-coeffs --M 4,6,8,10,12 --chi 1.0
    gradslip couette --eps 0.1 --times 0.1,0.25
    gradslip convergence --eps 2^-4:2^-10 --composite
    gradslip slip-bc-records --M 9

Every option may also come from a flat `key = value` file given with
--config; command-line values win.
"""

import argparse
import csv
from dataclasses import dataclass, field, fields
import math
import os
import sys
from typing import List, Optional

import numpy as np

from .moment_core import build_system
from .boundary_ops import build_bc, check_maximal_positive, check_strict_dissipativity
from .half_space import REFERENCE_BGK, slip_coefficients, reference_coefficients, generalized_eigen
from .general_slip_bc import slip_bc_records, record_rows
from .couette import (build_couette, couette_slip_constants, CouetteRun, CosineWall, TabulatedWall,
                      solve_moment_couette, solve_ns_couette, error_report, l2_norm,
                      fitted_slope, build_asymptotic_couette, moment_reference, default_length,
                      layer_quadrature)

CSV_VERSION = "1"
COEFF_NAMES = ("k0", "t0", "t1", "k1", "k2", "t2")


class ConfigError(ValueError):
    pass


def _float_list(text):
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            # 2^-4:2^-10 expands over integer exponents
            a, b = (p.strip() for p in part.split(":"))
            if not (a.startswith("2^") and b.startswith("2^")):
                raise ConfigError("ranges must look like 2^-4:2^-10")
            p, q = int(a[2:]), int(b[2:])
            step = 1 if q >= p else -1
            out.extend(2.0 ** k for k in range(p, q + step, step))
        elif part.startswith("2^"):
            out.append(2.0 ** float(part[2:]))
        else:
            out.append(float(part))
    return out


def _int_list(text):
    vals = []
    for part in str(text).split(","):
        part = part.strip()
        if part:
            if int(float(part)) != float(part):
                raise ConfigError("M values must be integers")
            vals.append(int(float(part)))
    return vals


@dataclass
class RunConfig:
    command: str
    M: List[int] = field(default_factory=list)
    chi: List[float] = field(default_factory=lambda: [1.0])
    eps: List[float] = field(default_factory=list)
    grid: int = 2000
    dt: Optional[float] = None
    T: float = 0.25
    times: List[float] = field(default_factory=list)
    out: str = "out"
    wall: str = "cosine"
    wall_file: Optional[str] = None
    couette: bool = False
    composite: bool = False

    def validate(self):
        for name in ("M", "chi", "eps"):
            if getattr(self, name) == [] and name in self.required():
                raise ConfigError("parameter list '%s' must not be empty" % name)
        if any(m < 3 for m in self.M):
            raise ConfigError("moment orders must be >= 3")
        if self.command in ("couette", "convergence") or self.couette:
            if any(m % 2 == 0 for m in self.M):
                raise ConfigError("Couette commands need odd M")
        if any(not 0 < c <= 1 for c in self.chi):
            raise ConfigError("chi values must lie in (0, 1]")
        if any(not 0 < e < 1 for e in self.eps):
            raise ConfigError("eps values must lie in (0, 1)")
        if self.grid < 4:
            raise ConfigError("grid must have at least 4 cells")
        if self.T <= 0:
            raise ConfigError("T must be positive")
        if self.wall not in ("cosine", "custom-file"):
            raise ConfigError("wall must be 'cosine' or 'custom-file'")
        if self.wall == "custom-file" and not self.wall_file:
            raise ConfigError("--wall custom-file needs --wall-file PATH")
        return self

    def required(self):
        return {"assemble": ("M", "chi"), "slip-coeffs": ("M", "chi"), "couette": ("eps", "M"),
                "convergence": ("eps", "M"), "slip-bc-records": ("chi",)}[self.command]

    def wall_signal(self):
        if self.wall == "cosine":
            return CosineWall()
        return TabulatedWall.from_file(self.wall_file)


_PARSERS = {"M": _int_list, "chi": _float_list, "eps": _float_list, "times": _float_list,
            "grid": int, "T": float, "dt": float, "out": str, "wall": str, "wall_file": str,
            "couette": lambda v: str(v).lower() in ("1", "true", "yes", "on"),
            "composite": lambda v: str(v).lower() in ("1", "true", "yes", "on")}

_DEFAULT_M = {"assemble": [5], "slip-coeffs": [4, 6, 8, 10, 12], "couette": [7],
              "convergence": [7], "slip-bc-records": []}
_DEFAULT_EPS = {"couette": [0.1], "convergence": [2.0 ** -k for k in range(4, 11)]}


def read_config(path):
    """Flat key = value lines; '#' starts a comment."""
    values = {}
    try:
        with open(path) as fh:
            for n, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError("%s:%d: expected key = value" % (path, n))
                k, v = (s.strip() for s in line.split("=", 1))
                k = k.replace("-", "_")
                if k not in _PARSERS:
                    raise ConfigError("%s:%d: unknown key '%s'" % (path, n, k))
                values[k] = v
    except OSError as exc:
        raise ConfigError("cannot read config %s: %s" % (path, exc)) from exc
    return values


def make_config(command, args):
    raw = read_config(args.config) if args.config else {}
    for f in fields(RunConfig):
        if f.name == "command":
            continue
        v = getattr(args, f.name, None)
        if v is not None and v is not False:
            raw[f.name] = v
    cfg = RunConfig(command)
    for k, v in raw.items():
        setattr(cfg, k, _PARSERS[k](v) if isinstance(v, str) or k in ("M", "chi", "eps", "times") else v)
    if "M" not in raw:
        cfg.M = list(_DEFAULT_M[command])
    if "eps" not in raw and command in _DEFAULT_EPS:
        cfg.eps = list(_DEFAULT_EPS[command])
    if "times" not in raw and command == "convergence":
        cfg.times = [0.1]
    return cfg.validate()


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".12g")
    return str(v)


def write_csv(path, header, rows):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for r in rows:
                w.writerow([_fmt(v) for v in r])
    except OSError as exc:
        raise OSError("cannot write %s: %s" % (path, exc)) from exc
    return path


def _outdir(cfg):
    try:
        os.makedirs(cfg.out, exist_ok=True)
    except OSError as exc:
        raise OSError("cannot create output directory %s: %s" % (cfg.out, exc)) from exc
    return cfg.out


# commands ---------------------------------------------------------------------

def cmd_assemble(cfg):
    out = _outdir(cfg)
    paths = []
    for M in cfg.M:
        system = build_system(M)
        lam = np.linalg.eigvalsh(system.A2)
        tol = 1e-9 * np.abs(lam).max()
        spectrum = generalized_eigen(system.A2, system.Q, system.G, system.H)
        for chi in cfg.chi:
            op = build_bc(system, chi, "modified")
            cert = check_maximal_positive(op, system.A2)
            lines = ["format_version = %s" % CSV_VERSION,
                     "M = %d" % M, "chi = %s" % _fmt(chi),
                     "N = %d" % system.N, "m = %d" % system.basis.m, "n = %d" % system.basis.n,
                     "A2_positive = %d" % (lam > tol).sum(),
                     "A2_negative = %d" % (lam < -tol).sum(),
                     "A2_zero = %d" % (np.abs(lam) <= tol).sum(),
                     "pencil_positive = %d" % spectrum.count("positive"),
                     "pencil_negative = %d" % spectrum.count("negative"),
                     "pencil_zero = %d" % spectrum.count("zero"),
                     "pencil_infinite = %d" % spectrum.count("infinite"),
                     "rank_B = %d" % np.linalg.matrix_rank(op.B),
                     "boundary_space_dim = %d" % cert.dimN,
                     "boundary_min_quadratic = %s" % _fmt(cert.min_quadratic),
                     "maximal_positive = %s" % cert.passed]
            if M % 2:
                cs = build_couette(M, chi)
                dc = check_strict_dissipativity(cs.Bc, cs.Ac)
                K, J = couette_slip_constants(cs)
                lines += ["couette_dissipativity_c = %s" % _fmt(dc.c),
                          "couette_dissipativity_margin = %s" % _fmt(dc.margin),
                          "couette_K = %s" % _fmt(K), "couette_J = %s" % _fmt(J)]
            else:
                lines.append("couette_dissipativity_c = n/a (even M)")
            path = os.path.join(out, "assemble_M%d_chi%s.txt" % (M, _fmt(chi)))
            with open(path, "w", newline="") as fh:
                fh.write("\n".join(lines) + "\n")
            paths.append(path)
    return paths


def cmd_slip_coeffs(cfg):
    header = ["M", "chi"] + list(COEFF_NAMES) + ["gamma1", "gamma2", "gamma3"] + \
             ["ref_" + k for k in COEFF_NAMES] + ["error"]
    rows = []
    for M in cfg.M:
        for chi in cfg.chi:
            ref = [REFERENCE_BGK[k] if chi == 1.0 else None for k in COEFF_NAMES]
            try:
                c = slip_coefficients(M, chi)
                vals = [getattr(c, k) for k in COEFF_NAMES] + [c.gamma1, c.gamma2, c.gamma3]
                err = ""
            except Exception as exc:       # recorded in-row, sweep continues
                vals, err = [None] * 9, "%s: %s" % (type(exc).__name__, exc)
            rows.append([M, chi] + vals + ref + [err])
    return [write_csv(os.path.join(_outdir(cfg), "slip_coeffs.csv"), header, rows)]


def _times(cfg):
    return sorted(set(cfg.times) | {cfg.T})


def cmd_couette(cfg):
    out = _outdir(cfg)
    wall = cfg.wall_signal()
    paths = []
    for M in cfg.M:
        system = build_couette(M, cfg.chi[0])
        for eps in cfg.eps:
            base = dict(eps=eps, N_grid=cfg.grid, T=cfg.T, wall=wall, times=tuple(_times(cfg)))
            mom = solve_moment_couette(CouetteRun(solver="moment", dt=cfg.dt, **base), system)
            ns = {v: solve_ns_couette(CouetteRun(solver=v, dt=None, **base), dt=cfg.dt)
                  for v in ("ns_noslip", "ns_slip1", "ns_slip2")}
            for t in _times(cfg):
                x = ns["ns_noslip"].x
                um = np.interp(x, mom.x, mom.at(t))
                rows = zip(x, x / math.sqrt(eps), um, *(ns[v].at(t) for v in ns))
                name = "couette_M%d_eps%s_t%s.csv" % (M, _fmt(eps), _fmt(t))
                paths.append(write_csv(os.path.join(out, name),
                                       ["x2", "x2_over_sqrt_eps", "u_moment", "u_noslip",
                                        "u_slip1", "u_slip2"], rows))
    return paths


def convergence_study(eps_list, grid=2000, T=0.25, wall=None, M=7, chi=1.0, composite=False,
                      times=None):
    """Errors between NS slip variants (and optionally vs the asymptotics).

    Returns {(family, t): [(eps, error), ...]}.
    """
    wall = wall or CosineWall()
    times = sorted(set(times or ()) | {T})
    pairs = {"noslip-slip1": [], "slip1-slip2": []}
    for eps in eps_list:
        base = dict(eps=eps, N_grid=grid, T=T, wall=wall, times=tuple(times))
        prof = {v: solve_ns_couette(CouetteRun(solver=v, **base))
                for v in ("ns_noslip", "ns_slip1", "ns_slip2")}
        pairs["noslip-slip1"].append((eps, prof["ns_noslip"], prof["ns_slip1"]))
        pairs["slip1-slip2"].append((eps, prof["ns_slip1"], prof["ns_slip2"]))
    res = {}
    for t in times:
        for fam, rows in error_report(pairs, t).l2_by_eps.items():
            res[(fam, t)] = rows
    if composite:
        system = build_couette(M, chi)
        K, J = couette_slip_constants(system)
        for eps in eps_list:
            asym = build_asymptotic_couette(system, wall, eps, (K, J))
            xq, wq = layer_quadrature(default_length(eps, T), eps)
            ref = moment_reference(system, eps, [T], wall)
            diff = ref.evaluate(T, xq) - asym.composite(T, xq)
            res.setdefault(("moment-composite", T), []).append(
                (eps, math.sqrt(np.sum(wq * np.sum(diff ** 2, axis=0)))))
            ns = solve_ns_couette(CouetteRun(eps, grid, T=T, wall=wall, solver="ns_constructed",
                                             theta=0.5), K, J, dt=2e-5)
            err = l2_norm(ns.x, ns.at(T) - asym.ns_approximation(T, ns.x))
            res.setdefault(("ns-composite", T), []).append((eps, err))
    return res


def cmd_convergence(cfg):
    out = _outdir(cfg)
    res = convergence_study(cfg.eps, cfg.grid, cfg.T, cfg.wall_signal(), cfg.M[0], cfg.chi[0],
                            cfg.composite, cfg.times)
    rows, slopes = [], []
    for (fam, t), pts in sorted(res.items()):
        for eps, err in pts:
            rows.append([fam, t, eps, -math.log2(eps), math.log2(err)])
        rate = fitted_slope([p[0] for p in pts], [p[1] for p in pts])
        slopes.append([fam, t, len(pts), rate])
    return [write_csv(os.path.join(out, "convergence.csv"),
                      ["family", "t", "eps", "neg_log2_eps", "log2_error"], rows),
            write_csv(os.path.join(out, "convergence_slopes.csv"),
                      ["family", "t", "points", "rate"], slopes)]


def cmd_slip_bc_records(cfg):
    if cfg.M:
        coeffs = slip_coefficients(cfg.M[0], cfg.chi[0])
    else:
        coeffs = reference_coefficients()
    rows = record_rows(slip_bc_records(coeffs))
    return [write_csv(os.path.join(_outdir(cfg), "slip_bc_records.csv"),
                      ["order", "unknown", "symbol", "weight", "field", "layer", "field_order",
                       "derivative"], rows)]


COMMANDS = {"assemble": cmd_assemble, "slip-coeffs": cmd_slip_coeffs, "couette": cmd_couette,
            "convergence": cmd_convergence, "slip-bc-records": cmd_slip_bc_records}


def build_parser():
    p = argparse.ArgumentParser(prog="gradslip", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--config", help="flat key = value file")
        s.add_argument("--M", help="moment order(s), comma separated")
        s.add_argument("--chi", help="accommodation coefficient(s)")
        s.add_argument("--eps", help="Knudsen number(s); 2^-k and 2^-a:2^-b allowed")
        s.add_argument("--grid", help="grid cells")
        s.add_argument("--dt", help="time step")
        s.add_argument("--T", help="final time")
        s.add_argument("--times", help="extra output times")
        s.add_argument("--out", help="output directory")
        s.add_argument("--wall", choices=("cosine", "custom-file"))
        s.add_argument("--wall-file", dest="wall_file", help="CSV of t,u samples")
        s.add_argument("--couette", action="store_true", default=None,
                       help="assemble: also require an odd-M Couette chain")
        s.add_argument("--composite", action="store_true", default=None,
                       help="convergence: add the asymptotic-composite error curves")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = make_config(args.command, args)
        paths = COMMANDS[args.command](cfg)
    except (ConfigError, OSError, ValueError) as exc:
        print("gradslip %s: error: %s" % (args.command, exc), file=sys.stderr)
        return 2
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
