"""Command-line front end.

Subcommands
-----------
capacity-curve  closed-form and numerical capacity of the reflecting horizon over a z grid
blocks          per-block report of the reflecting or absorbing dual-rail channel
verify          run the self-check suites; exit 1 if any check fails
channel-info    apply the cloner or depolarizing channel to one input state

Every JSON document has the top-level keys ``channel``, ``params``,
``blocks``, ``capacity`` and ``checks`` in that order.  Exit codes: 0 success,
1 verification failure or structure violation, 2 usage or parameter error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from typing import Sequence

import numpy as np

from . import channels as ch
from .capacity import (
    CAPACITY,
    DualRailQubit,
    capacity_cloner,
    clone_fidelity,
    optimize_coherent_information,
    ppt_check,
    unruh_capacity,
)
from .exceptions import DimensionError, ParameterError, StructureViolation
from .fock import absorb_auto_cutoff
from .linalg import von_neumann_entropy
from .representations import choi_of
from .validation import check_count, check_in_range
from .verify import SUITES, run_suites

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

#: untracked block mass allowed by default when picking the cutoff of the capacity curve
CURVE_TAIL_TOL = 1e-5
#: blocks above this label get weights only in the ``blocks`` report unless --lmax says otherwise
REPORT_LMAX = 6
#: complement Choi matrices larger than this are not diagonalised in the ``blocks`` report
MAX_COMPLEMENT_CHOI_DIM = 2048

_FLOAT_TAG = "\x00f"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# output formatting


def fmt(x: float) -> str:
    """Sixteen significant digits, fixed layout, so output is byte-stable."""
    return f"{x:.15e}"


def _tag_floats(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (float, np.floating)):
        return _FLOAT_TAG + fmt(float(obj)) if math.isfinite(obj) else None
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _tag_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_tag_floats(v) for v in obj]
    return obj


def to_json(doc: dict) -> str:
    text = json.dumps(_tag_floats(doc), indent=2, ensure_ascii=False)
    return re.sub(r'"\\u0000f([^"]*)"', r"\1", text) + "\n"


def document(channel=None, params=None, blocks=None, capacity=None, checks=None) -> dict:
    return {
        "channel": channel,
        "params": params or {},
        "blocks": blocks or [],
        "capacity": capacity,
        "checks": checks or [],
    }


def to_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _complex_pair(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _matrix(M) -> dict:
    M = np.asarray(M, dtype=complex)
    return {"real": M.real.tolist(), "imag": M.imag.tolist()}


def _capacity_dict(res) -> dict:
    n = res.optimizer_input
    bloch = None
    if n is not None and n.shape == (2, 2):
        bloch = ch.bloch_coefficients(n).real.tolist()
    return {
        "label": res.label,
        "value": res.value,
        "optimizer_bloch": bloch,
        "iterations": res.iterations,
        "residual": res.residual,
        "n_max": res.cutoffs[0],
        "ell_max": res.cutoffs[1],
        "tail_bound": res.tail_bound,
        "tail_bound_rule": "untracked block mass (|I_c| <= 1 bit per block)",
    }


# ---------------------------------------------------------------------------
# subcommands


def cmd_capacity_curve(args) -> int:
    if args.channel not in (None, "reflecting"):
        raise UsageError("capacity-curve supports --channel reflecting only")
    z_min = check_in_range(args.z_min, "z-min", 0.0, 1.0, high_inclusive=False)
    z_max = check_in_range(args.z_max, "z-max", 0.0, 1.0, high_inclusive=False)
    steps = check_count(args.steps, "steps", 1)
    if z_max < z_min:
        raise ParameterError("z-max must not be below z-min")
    tail_tol = CURVE_TAIL_TOL if args.tol is None else check_in_range(args.tol, "tol", 0.0, 1.0, low_inclusive=False)
    zs = np.linspace(z_min, z_max, steps) if steps > 1 else np.array([z_min])
    rows = []
    for z in zs:
        z = float(z)
        closed = unruh_capacity(z)
        n_max = ch.tail_cutoff(z, tail_tol) if args.cutoff is None else check_count(args.cutoff, "cutoff")
        channel = ch.reflecting_dual_rail_channel(z, n_max, args.lmax)
        num = optimize_coherent_information(channel, label=CAPACITY)
        rows.append(
            (z, closed.value, num.value, abs(closed.value - num.value), n_max, channel.ells[-1], num.tail_bound)
        )
    header = ("z", "Q_closed", "Q_numeric", "abs_err", "n_max", "ell_max", "tail_bound")
    if args.format == "json":
        curve = [dict(zip(header, r)) for r in rows]
        params = {"z_min": z_min, "z_max": z_max, "steps": steps, "tail_tol": tail_tol, "cutoff": args.cutoff, "lmax": args.lmax}
        text = to_json(document("reflecting", params, capacity={"curve": curve}))
    else:
        text = to_csv(header, rows)
    emit(text, args.out)
    return EXIT_OK


def _block_report(channel, ell: int, detailed: bool, kind: str) -> dict:
    block = channel.block(ell)
    entry = {"ell": ell, "weight": block.weight, "dim": block.dim, "mass_spread": block.mass_spread}
    if not detailed or block.weight <= 1e-12:
        return entry
    bmap = channel.block_map(ell)
    if kind == "absorbing":
        if ell == 1:
            q, resid = ch.fit_depolarizing(bmap)
            entry["fit"] = {"model": "depolarizing", "q": q, "residual": resid}
        elif ell >= 2:
            k, resid = ch.fit_covariant_coefficient(bmap, ell)
            entry["fit"] = {"model": "covariant", "k": k, "q_equivalent": 1.0 - k, "residual": resid}
    elif kind == "reflecting":
        k, resid = ch.fit_covariant_coefficient(bmap, ell)
        entry["fit"] = {"model": "covariant", "k": k, "residual": resid}
        entry["weight_formula"] = float(ch.block_weights(channel.meta["z"], ell)[0][-1])
    if ell >= 1:
        ok, lam = ppt_check(choi_of(bmap))
        entry["ppt"] = {"is_ppt": ok, "min_pt_eigenvalue": lam}
        env = bmap.complement_blocks(np.eye(2) / 2)[0]
        if 2 * env.shape[0] <= MAX_COMPLEMENT_CHOI_DIM:
            J = choi_of(bmap.complement_apply, 2)
            ok, lam = ppt_check(J)
            entry["complement_ppt"] = {"is_ppt": ok, "min_pt_eigenvalue": lam}
        else:
            entry["complement_ppt"] = None
        entry["coherent_information_max"] = optimize_coherent_information(bmap).value
    return entry


def cmd_blocks(args) -> int:
    kind = args.channel
    if kind == "reflecting":
        if args.z is None:
            raise UsageError("--z is required for the reflecting channel")
        z = check_in_range(args.z, "z", 0.0, 1.0, high_inclusive=False)
        tol = 1e-10 if args.tol is None else check_in_range(args.tol, "tol", 0.0, 1.0, low_inclusive=False)
        n_max = ch.tail_cutoff(z, tol) if args.cutoff is None else check_count(args.cutoff, "cutoff")
        channel = ch.reflecting_dual_rail_channel(z, n_max, args.lmax)
        channel.meta["z"] = z
        params = {"z": z, "n_max": n_max, "lmax": args.lmax, "tol": tol}
        label = CAPACITY
    elif kind == "absorbing":
        if args.g is None:
            raise UsageError("--g is required for the absorbing channel")
        g = check_in_range(args.g, "g", 0.0, low_inclusive=False)
        tol = 1e-10 if args.tol is None else check_in_range(args.tol, "tol", 0.0, 1.0, low_inclusive=False)
        n_max = absorb_auto_cutoff(g, tol) if args.cutoff is None else check_count(args.cutoff, "cutoff")
        channel = ch.absorbing_dual_rail_channel(g, n_max)
        params = {"g": g, "n_max": n_max, "lmax": args.lmax, "tol": tol}
        label = "single-letter coherent information"
    else:
        raise UsageError("blocks supports --channel reflecting or absorbing")
    report_lmax = REPORT_LMAX if args.lmax is None else args.lmax
    blocks = [_block_report(channel, ell, ell <= report_lmax, kind) for ell in channel.ells]
    cap = _capacity_dict(optimize_coherent_information(channel, label=label))
    cap["cross_block_coherence"] = channel.cross_coherence
    emit(to_json(document(kind, params, blocks, cap)), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    names = None
    if args.suite:
        names = [s.strip() for item in args.suite for s in item.split(",") if s.strip()]
        bad = [n for n in names if n not in SUITES]
        if bad:
            raise UsageError(f"unknown suite(s) {', '.join(bad)}; choose from {', '.join(SUITES)}")
    tol = None if args.tol is None else check_in_range(args.tol, "tol", 0.0, low_inclusive=False)
    checks = run_suites(names, tol)
    failed = [c.name for c in checks if not c.passed]
    params = {"suites": names or list(SUITES), "tol_override": tol, "failed": failed}
    emit(to_json(document(None, params, checks=[c.as_dict() for c in checks])), args.out)
    return EXIT_FAIL if failed else EXIT_OK


def parse_state(text: str) -> DualRailQubit:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"state must be two comma-separated amplitudes 'a,b', got {text!r}")
    try:
        a, b = (complex(p.strip().replace(" ", "")) for p in parts)
    except ValueError as exc:
        raise UsageError(f"cannot parse amplitudes {text!r}: {exc}") from None
    try:
        return DualRailQubit.normalized(a, b)
    except ParameterError as exc:
        raise UsageError(str(exc)) from None


def cmd_channel_info(args) -> int:
    phi = parse_state(args.state)
    rho = phi.density_matrix()
    params = {"state": _complex_pair(phi.a) + _complex_pair(phi.b)}
    if args.channel == "cloning":
        ell = check_count(args.ell if args.ell is not None else 2, "ell", 1)
        params["ell"] = ell
        channel = ch.cloning_channel(ell)
        out = channel.apply(rho)
        env = channel.complement_apply(rho)
        entry = {
            "ell": ell,
            "dim": ell + 1,
            "output": _matrix(out),
            "entropy": von_neumann_entropy(out, validate=False),
            "complement_entropy": von_neumann_entropy(env, validate=False),
            "coherent_information": channel.coherent_information(rho),
            "clone_fidelity": clone_fidelity(ell, phi) if 2 <= ell <= 6 else None,
        }
        cap = {"label": CAPACITY, "value": capacity_cloner(ell)}
    elif args.channel == "depolarizing":
        q = check_in_range(args.q if args.q is not None else 2.0 / 3.0, "q", 0.0, 4.0 / 3.0)
        params["q"] = q
        out = ch.depolarizing_apply(q, rho)
        entry = {"ell": 1, "dim": 2, "output": _matrix(out), "entropy": von_neumann_entropy(out, validate=False)}
        ok, lam = ppt_check(choi_of(ch.depolarizing_channel(q)))
        entry["ppt"] = {"is_ppt": ok, "min_pt_eigenvalue": lam}
        cap = None
    else:
        raise UsageError("channel-info supports --channel cloning or depolarizing")
    emit(to_json(document(args.channel, params, [entry], cap)), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bhchannel", description="Horizon quantum channels: capacities, blocks and self-checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, channels):
        p.add_argument("--channel", choices=channels, default=channels[0])
        p.add_argument("--cutoff", type=int, help="per-mode occupation cutoff n_max (default: auto)")
        p.add_argument("--lmax", type=int, help="highest block label")
        p.add_argument("--tol", type=float)
        p.add_argument("--out", help="output path (default: stdout)")

    p = sub.add_parser("capacity-curve", help="Q(z) closed form vs optimizer on the constructed channel")
    common(p, ["reflecting"])
    p.add_argument("--z-min", type=float, default=0.0)
    p.add_argument("--z-max", type=float, default=0.9)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_capacity_curve)

    p = sub.add_parser("blocks", help="per-block report of a dual-rail horizon channel")
    common(p, ["reflecting", "absorbing"])
    p.add_argument("--z", type=float)
    p.add_argument("--g", type=float)
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("verify", help="run self-check suites")
    p.add_argument("--suite", action="append", help=f"suite name(s), comma separated: {', '.join(SUITES)}")
    p.add_argument("--tol", type=float, help="tolerance override for truncation-limited checks")
    p.add_argument("--out")
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("channel-info", help="apply the cloner or depolarizing channel to one state")
    p.add_argument("--channel", choices=["cloning", "depolarizing"], required=True)
    p.add_argument("--ell", type=int)
    p.add_argument("--q", type=float)
    p.add_argument("--state", default="1,0", help="dual-rail amplitudes 'a,b' (normalised by the tool)")
    p.add_argument("--out")
    p.add_argument("--format", choices=["json"], default="json")
    p.set_defaults(func=cmd_channel_info)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"bhchannel: usage error: {exc}\n")
        return EXIT_USAGE
    except (ParameterError, DimensionError) as exc:
        sys.stderr.write(f"bhchannel: parameter error: {exc}\n")
        return EXIT_USAGE
    except StructureViolation as exc:
        sys.stderr.write(f"bhchannel: structure violation: {exc}\n")
        return EXIT_FAIL
    except OSError as exc:
        sys.stderr.write(f"bhchannel: I/O error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
