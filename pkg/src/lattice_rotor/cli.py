"""Command-line experiment runner.

Subcommands reproduce the desk-scale experiments: single orbits, period
scans along the diagonal, fixed-point densities per class, period
distributions on square classes, cylinder-coordinate pixel plots, and
period-function asymptotics.

Conventions: the rotation parameter is accepted only as an exact
fraction 'p/q' (or '1/2^k'); every CSV starts with a comment line
carrying the exact parameter, the step cap, and a format version, and
reruns with the same configuration are byte-identical; images are binary
PGM (P5, maxval 255) with a JSON sidecar describing the coordinate map.
Exit codes: 0 success, 1 usage error, 2 truncation or escape.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import hamiltonian as ham
from . import return_map as rm
from . import statistics as st
from ._engine import EscapeError, GuardViolation, IrregularOrbit
from .core_map import RotationParameter, orbit_period
from .statistics import build_invariant_set, period_distribution

FORMAT_VERSION = 1


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures on exit code 1."""

    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _meta_line(lam: RotationParameter | None, cap) -> str:
    lam_text = f"{lam.p}/{lam.q}" if lam is not None else "-"
    return f"# lattice-rotor format={FORMAT_VERSION} lambda={lam_text} step_cap={cap}\n"


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline="\n"), True


def worker_count() -> int:
    try:
        n = int(os.environ.get("LATTICE_ROTOR_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


def _chunks(seq, n):
    k = max(1, (len(seq) + n - 1) // n)
    return [seq[i:i + k] for i in range(0, len(seq), k)]


# ---------------------------------------------------------------------------
# orbit
# ---------------------------------------------------------------------------

def cmd_orbit(args) -> int:
    lam = RotationParameter.parse(args.lam)
    x, y = (int(t) for t in args.seed.split(","))
    rec = orbit_period((x, y), lam, max_steps=args.max_steps)
    out, close = _open_out(args.output)
    try:
        out.write(_meta_line(lam, args.max_steps))
        out.write(f"# period={rec.period} symmetric={rec.symmetric} "
                  f"truncated={rec.truncated} "
                  f"witnesses={';'.join(f'{w[0]},{w[1]}' for w in rec.witnesses)}\n")
        out.write("step,x,y,on_fix_g,on_fix_h\n")
        cx, cy = x, y
        for step in range(rec.period):
            out.write(f"{step},{cx},{cy},{int(cx == cy)},"
                      f"{int(2 * cx == lam.p * cy // lam.q)}\n")
            cx, cy = lam.p * cx // lam.q - cy, cx
    finally:
        if close:
            out.close()
    if rec.truncated and not args.allow_truncated:
        print("orbit truncated at the step cap", file=sys.stderr)
        return 2
    return 0


# ---------------------------------------------------------------------------
# period scan
# ---------------------------------------------------------------------------

def _scan_chunk(payload):
    p, q, xs, rev_cap = payload
    lam = RotationParameter(p, q)
    rows = []
    for x in xs:
        if x == 0:
            rows.append((0, 1, 0, False))
            continue
        try:
            period, revs, truncated = st.orbit_period_fast((x, x), lam,
                                                           rev_cap=rev_cap)
        except (IrregularOrbit, EscapeError, GuardViolation):
            rec = orbit_period((x, x), lam, max_steps=10**7)
            period, revs, truncated = rec.period, 0, rec.truncated
        rows.append((x, period, revs, truncated))
    return rows


def cmd_period_scan(args) -> int:
    lam = RotationParameter.parse(args.lam)
    xs = list(range(args.x_min, args.x_max + 1))
    nproc = worker_count()
    if nproc > 1 and len(xs) > 256:
        payloads = [(lam.p, lam.q, chunk, args.rev_cap)
                    for chunk in _chunks(xs, nproc)]
        with ProcessPoolExecutor(max_workers=nproc) as pool:
            results = [row for rows in pool.map(_scan_chunk, payloads)
                       for row in rows]
    else:
        results = _scan_chunk((lam.p, lam.q, xs, args.rev_cap))

    out, close = _open_out(args.output)
    truncated_any = False
    try:
        out.write(_meta_line(lam, args.rev_cap))
        out.write("x,period,revolutions,T_lambda,critical_e,truncated\n")
        from ._engine import q_times_H
        for x, period, revs, truncated in results:
            truncated_any |= truncated
            tl = lam.p * period / lam.q / math.pi
            h1 = q_times_H(x, x, lam.p, lam.q)
            h2 = q_times_H(x + 1, x + 1, lam.p, lam.q)
            e_min = h1 // lam.q + (0 if h1 % lam.q == 0 else 1)
            marks = [e for e in range(e_min, h2 // lam.q + 1)
                     if h1 <= e * lam.q < h2 and ham.is_critical(e)]
            mark = ";".join(str(e) for e in marks)
            out.write(f"{x},{period},{revs},{tl!r},{mark},{int(truncated)}\n")
    finally:
        if close:
            out.close()
    return 2 if truncated_any and not args.allow_truncated else 0


# ---------------------------------------------------------------------------
# density
# ---------------------------------------------------------------------------

def _density_row(e: int, lam_text: str | None, s_max: int):
    if lam_text:
        lam = RotationParameter.parse(lam_text)
        return rm.density_delta(e, lam)
    last = None
    for s in range(6, s_max + 1):
        lam = RotationParameter(1, 2 ** s)
        try:
            return rm.density_delta(e, lam)
        except (EscapeError, GuardViolation, IrregularOrbit) as exc:
            last = exc
    raise EscapeError(f"no parameter up to 1/2^{s_max} populated e={e}: {last}")


def cmd_density(args) -> int:
    out, close = _open_out(args.output)
    bad = False
    try:
        lam_for_meta = (RotationParameter.parse(args.lam) if args.lam else None)
        out.write(_meta_line(lam_for_meta, "-"))
        out.write("e,lambda,delta,eta,formula,coprimality_ok,matches_formula,"
                  "classes,underpopulated\n")
        for e in range(args.e_min, args.e_max + 1):
            if not ham.is_critical(e):
                continue
            try:
                rep = _density_row(e, args.lam, args.s_max)
            except (EscapeError, GuardViolation, IrregularOrbit):
                out.write(f"{e},,,,,,,,1\n")
                bad = True
                continue
            out.write(f"{e},{rep.lam},{rep.delta},{rep.eta},{rep.formula},"
                      f"{int(rep.coprimality_ok)},{int(rep.matches_formula)},"
                      f"{rep.classes},0\n")
    finally:
        if close:
            out.close()
    return 2 if bad else 0


# ---------------------------------------------------------------------------
# distribution
# ---------------------------------------------------------------------------

def cmd_distribution(args) -> int:
    lam = RotationParameter.parse(args.lam) if args.lam else None
    t0 = time.monotonic()
    try:
        inv = build_invariant_set(args.v_k, args.m, lam=lam,
                                  lam_exponents=range(args.s_min, args.s_max + 1))
    except (EscapeError, GuardViolation, IrregularOrbit) as exc:
        print(f"distribution failed: {exc}", file=sys.stderr)
        return 2
    dist = period_distribution(inv)
    wall = time.monotonic() - t0

    csv_path = args.out_prefix + ".csv"
    with open(csv_path, "w", newline="\n") as out:
        out.write(_meta_line(inv.lam, "-"))
        out.write(f"# e={inv.e} v_k={inv.v_k} m={inv.m} kappa={dist.kappa!r}\n")
        out.write("period,cumulative_num,cumulative_den,cumulative\n")
        for t, cum in dist.D:
            out.write(f"{t},{cum.numerator},{cum.denominator},{float(cum)!r}\n")
    summary = {
        "e": inv.e, "v_k": inv.v_k, "m": inv.m,
        "lambda": f"{inv.lam.p}/{inv.lam.q}",
        "sample_size": dist.N_bar,
        "band_size": inv.n_band,
        "overspill": inv.overspill,
        "g": dist.g, "h": dist.h, "kappa": dist.kappa,
        "distance_to_R": dist.distance_to_R,
        "symmetric_fraction": float(dist.symmetric_fraction),
        "D_at_16": dist.D_at(16.0),
        "wall_seconds": wall,
    }
    with open(args.out_prefix + ".json", "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {csv_path}; distance_to_R={dist.distance_to_R:.4f} "
          f"sample={dist.N_bar}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# phase plot
# ---------------------------------------------------------------------------

@dataclass
class PixelPlot:
    """Accumulator mapping cylinder coordinates onto a grayscale grid."""

    width: int
    height: int
    rho_min: float
    rho_max: float
    counts: np.ndarray = field(default=None)
    clipped: int = 0

    def __post_init__(self):
        if self.counts is None:
            self.counts = np.zeros((self.height, self.width), dtype=np.int64)

    def add(self, theta: float, rho: float):
        px = int((theta + 0.5) * self.width)
        py = int((self.rho_max - rho) / (self.rho_max - self.rho_min)
                 * self.height)
        if 0 <= px < self.width and 0 <= py < self.height:
            self.counts[py, px] += 1
        else:
            self.clipped += 1

    def to_pgm(self) -> bytes:
        maxc = int(self.counts.max())
        if maxc == 0:
            gray = np.full(self.counts.shape, 255, dtype=np.uint8)
        else:
            gray = (255 - (self.counts * 255) // maxc).astype(np.uint8)
        header = f"P5\n{self.width} {self.height}\n255\n".encode()
        return header + gray.tobytes()


def write_pgm(path: str, plot: PixelPlot):
    with open(path, "wb") as fh:
        fh.write(plot.to_pgm())


def cmd_phase_plot(args) -> int:
    lam = RotationParameter.parse(args.lam)
    e = args.e
    plot = PixelPlot(width=args.width, height=args.height,
                     rho_min=args.rho_min, rho_max=args.rho_max)
    seed_reports = []
    bad = False
    if args.seeds > 0:
        try:
            frame = st.choose_anchor(e, lam)
        except (EscapeError, GuardViolation, IrregularOrbit) as exc:
            print(f"no anchor for e={e} at lam={lam}: {exc}", file=sys.stderr)
            return 2
        cls = frame.cls
        W = 2 * cls.v1 + 1
        p, q = lam.p, lam.q
        qlo, qhi = e * q, cls.e.interval_end * q
        for i in range(args.seeds):
            rho = args.rho_min + (args.rho_max - args.rho_min) * (i + 0.5) / args.seeds
            x = frame.z0[0] + round(rho * W)
            z = (x, x)
            status = "ok"
            cx, cy = z
            try:
                for _ in range(args.steps):
                    pt = st.to_cylinder((cx, cy), frame)
                    plot.add(float(pt.theta), float(pt.rho))
                    cx, cy, _tau = rm.eng.phi_fast(cx, cy, p, q, cls.v1,
                                                   cls.k, qlo, qhi)
                    if (cx, cy) == z:
                        break
            except (EscapeError, GuardViolation, IrregularOrbit) as exc:
                status = f"escape: {exc}"
                bad = True
            seed_reports.append({"seed": list(z), "rho": rho, "status": status})
    write_pgm(args.output, plot)
    sidecar = {
        "e": e, "lambda": f"{lam.p}/{lam.q}",
        "width": args.width, "height": args.height,
        "theta_range": [-0.5, 0.5],
        "rho_range": [args.rho_min, args.rho_max],
        "clipped": plot.clipped,
        "seeds": seed_reports,
    }
    with open(args.output + ".json", "w") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 2 if bad and not args.allow_truncated else 0


# ---------------------------------------------------------------------------
# asymptotics
# ---------------------------------------------------------------------------

def cmd_asymptotics(args) -> int:
    v_k = args.v_k
    out, close = _open_out(args.output)
    try:
        out.write(_meta_line(None, "-"))
        out.write("b,e,scaled_deviation,limiting_form,epsilon,epsilon_lower,"
                  "epsilon_upper,T_prime,rho_bar\n")
        for j in range(args.b_steps):
            b = Fraction(j, args.b_steps)
            alpha_exact = (v_k + b) ** 2
            e = ham.class_of(alpha_exact)
            alpha = float(alpha_exact)
            dev = v_k ** 1.5 * (ham.period_T_float(alpha) - math.pi) / 4.0
            form = ham.asymptotic_form(float(b))
            eps = ham.epsilon_b(float(b), v_k)
            lo, hi = ham.epsilon_bounds(float(b))
            tp = ham.period_T_prime(e)
            try:
                rb = float(ham.rho_bar(e))
            except ZeroDivisionError:
                rb = math.inf
            out.write(f"{float(b)!r},{e},{dev!r},{form!r},{eps!r},"
                      f"{lo!r},{hi!r},{float(tp)!r},{rb!r}\n")
    finally:
        if close:
            out.close()
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def main(argv=None) -> int:
    parser = _Parser(prog="lattice-rotor",
                     description="exact experiments with discretised rotations")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p_orbit = sub.add_parser("orbit", help="iterate one seed to first return")
    p_orbit.add_argument("--lambda", dest="lam", required=True)
    p_orbit.add_argument("--seed", required=True, metavar="X,Y")
    p_orbit.add_argument("--max-steps", type=int, default=10**7)
    p_orbit.add_argument("--allow-truncated", action="store_true")
    p_orbit.add_argument("-o", "--output", default="-")
    p_orbit.set_defaults(func=cmd_orbit)

    p_scan = sub.add_parser("period-scan",
                            help="periods of diagonal seeds over an x range")
    p_scan.add_argument("--lambda", dest="lam", required=True)
    p_scan.add_argument("--x-min", type=int, default=0)
    p_scan.add_argument("--x-max", type=int, required=True)
    p_scan.add_argument("--rev-cap", type=int, default=10**6)
    p_scan.add_argument("--allow-truncated", action="store_true")
    p_scan.add_argument("-o", "--output", default="-")
    p_scan.set_defaults(func=cmd_period_scan)

    p_dens = sub.add_parser("density",
                            help="fixed-point densities per polygon class")
    p_dens.add_argument("--e-min", type=int, default=0)
    p_dens.add_argument("--e-max", type=int, required=True)
    p_dens.add_argument("--lambda", dest="lam", default=None)
    p_dens.add_argument("--s-max", type=int, default=18,
                        help="deepest 1/2^s tried in the automatic scan")
    p_dens.add_argument("-o", "--output", default="-")
    p_dens.set_defaults(func=cmd_density)

    p_dist = sub.add_parser("distribution",
                            help="period distribution on a square class")
    p_dist.add_argument("--v-k", type=int, required=True)
    p_dist.add_argument("--m", type=int, default=32)
    p_dist.add_argument("--lambda", dest="lam", default=None)
    p_dist.add_argument("--s-min", type=int, default=8)
    p_dist.add_argument("--s-max", type=int, default=25)
    p_dist.add_argument("--out-prefix", required=True)
    p_dist.set_defaults(func=cmd_distribution)

    p_plot = sub.add_parser("phase-plot",
                            help="pixel plot of return orbits in cylinder coordinates")
    p_plot.add_argument("--e", type=int, required=True)
    p_plot.add_argument("--lambda", dest="lam", required=True)
    p_plot.add_argument("--width", type=int, default=280)
    p_plot.add_argument("--height", type=int, default=280)
    p_plot.add_argument("--rho-min", type=float, default=-8.0)
    p_plot.add_argument("--rho-max", type=float, default=8.0)
    p_plot.add_argument("--seeds", type=int, default=64)
    p_plot.add_argument("--steps", type=int, default=4096)
    p_plot.add_argument("--allow-truncated", action="store_true")
    p_plot.add_argument("-o", "--output", required=True)
    p_plot.set_defaults(func=cmd_phase_plot)

    p_asym = sub.add_parser("asymptotics",
                            help="period-function asymptotics over a b grid")
    p_asym.add_argument("--v-k", type=int, required=True)
    p_asym.add_argument("--b-steps", type=int, default=100)
    p_asym.add_argument("-o", "--output", default="-")
    p_asym.set_defaults(func=cmd_asymptotics)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
