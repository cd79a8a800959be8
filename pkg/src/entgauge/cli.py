"""Command-line front end.

Exit codes: 0 success or separable, 1 entangled, 2 error, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import __version__, repro
from .decompositions import schmidt_decompose, slater_decompose
from .errors import EntgaugeError
from .norm import Budget, Status, VSetSpec, q_bracket, q_pure_closed_form, verdict
from .state_io import GENERATORS, generate, make_manifest, read_state, write_state
from .tensor_core import PureState

EXIT_OK, EXIT_ENTANGLED, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2, 3


def _num(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _emit(args, human, payload):
    if args.json:
        print(json.dumps(payload, indent=2, default=_num))
    else:
        print(human)


def _budget(args):
    return Budget(multistarts=args.multistarts, max_iters=args.max_iters,
                  lp_pool=args.lp_pool, seed=args.seed)


def _spec_for(state, args):
    return VSetSpec(state.parties, state.local_dim, args.family, args.rank_bound)


def cmd_decompose(args):
    state = read_state(args.path)
    if not isinstance(state, PureState):
        raise EntgaugeError("decompose needs a pure state file")
    if args.kind == "schmidt":
        form = schmidt_decompose(state, cutoff=args.cutoff)
        coeffs = form.coefficients
        coeffs = coeffs[coeffs > args.cutoff]
    else:
        form = slater_decompose(state, cutoff=args.cutoff)
        coeffs = form.coefficients
    resid = float(np.linalg.norm(form.reconstruct() - state.amplitudes))
    payload = {"kind": args.kind, "coefficients": coeffs.tolist(), "rank": int(coeffs.size),
               "reconstruction_residual": resid}
    human = (f"{args.kind} coefficients: "
             + ", ".join(f"{c:.12g}" for c in coeffs)
             + f"\nrank: {coeffs.size}\nreconstruction residual: {resid:.3g}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
    _emit(args, human, payload)
    return EXIT_OK


def _certificates(bracket):
    out = {}
    if bracket.witness is not None:
        w = bracket.witness
        out["witness"] = {"source": w.source, "value": w.value, "reverified_norm": w.reverified,
                          "operator": [[[z.real, z.imag] for z in row] for row in w.operator]}
    if bracket.decomposition is not None:
        d = bracket.decomposition
        out["decomposition"] = {
            "coefficients": d.coefficients.tolist(),
            "residual_cost": d.residual_cost,
            "left": [[[z.real, z.imag] for z in v] for v in d.left],
            "right": [[[z.real, z.imag] for z in v] for v in d.right],
        }
    return out


def cmd_norm(args):
    started = time.perf_counter()
    state = read_state(args.path)
    spec = _spec_for(state, args)
    if args.method == "closed":
        try:
            value = q_pure_closed_form(state, spec)
        except EntgaugeError as exc:
            raise EntgaugeError(f"{exc} (hint: use --method bracket)") from None
        _emit(args, f"q_{spec.label()} = {value:.12g}",
              {"spec": spec.label(), "method": "closed", "value": value})
        return EXIT_OK
    budget = _budget(args)
    b = q_bracket(state, spec, budget)
    payload = {"spec": spec.label(), "method": "bracket", "lower": b.lower, "upper": b.upper,
               "lower_method": b.lower_method, "upper_method": b.upper_method,
               "manifest": make_manifest(args.seed, budget, spec, started).as_dict()}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump({**payload, **_certificates(b)}, fh, default=_num)
        payload["certificates"] = args.out
    human = f"q_{spec.label()} in [{b.lower:.10g}, {b.upper:.10g}]"
    if args.out:
        human += f"\ncertificates written to {args.out}"
    _emit(args, human, payload)
    return EXIT_OK


def cmd_verdict(args):
    state = read_state(args.path)
    spec = _spec_for(state, args)
    v = verdict(state, spec, _budget(args), tol=args.tol)
    payload = {"status": v.status.value, "label": v.label, "spec": spec.label(),
               "lower": v.bracket.lower, "upper": v.bracket.upper,
               "threshold_gap": v.threshold_gap}
    human = (f"{v.label}: q_{spec.label()} in [{v.bracket.lower:.10g}, {v.bracket.upper:.10g}]"
             f" (gap {v.threshold_gap:+.3g})")
    _emit(args, human, payload)
    return {Status.SEPARABLE: EXIT_OK, Status.ENTANGLED: EXIT_ENTANGLED,
            Status.INCONCLUSIVE: EXIT_INCONCLUSIVE}[v.status]


def _parse_params(items):
    params = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise EntgaugeError(f"parameter {item!r} is not of the form key=value")
        params[key] = value
    return params


def cmd_generate(args):
    params = _parse_params(args.param)
    state = generate(args.name, params, args.seed)
    meta = {"generator": args.name, "seed": args.seed, **params}
    if args.out:
        write_state(state, args.out, meta)
        _emit(args, f"wrote {args.name} to {args.out}", {"generator": args.name, "path": args.out})
    else:
        from .state_io import format_state

        sys.stdout.write(format_state(state, meta))
    return EXIT_OK


def cmd_repro(args):
    params = {key: getattr(args, key) for key in ("n", "k", "l") if getattr(args, key) is not None}
    cases = repro.run(args.case, args.seed, _budget(args), **params)
    payload = [c.as_dict() for c in cases]
    _emit(args, repro.format_table(cases), payload)
    return EXIT_OK if all(c.passed for c in cases) else EXIT_ENTANGLED


def build_parser():
    p = argparse.ArgumentParser(prog="entgauge", description="Entanglement gauges q_K.")
    p.add_argument("--version", action="version", version=f"entgauge {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, budget=True):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--seed", type=int, default=0)
        if budget:
            sp.add_argument("--multistarts", type=int, default=32)
            sp.add_argument("--max-iters", type=int, default=200)
            sp.add_argument("--lp-pool", type=int, default=4000)

    def measure(sp):
        sp.add_argument("--family", choices=("tensor", "vee", "wedge"), default="tensor")
        sp.add_argument("--rank-bound", type=int, default=1)

    sp = sub.add_parser("decompose", help="Schmidt or Slater form of a pure k=2 state")
    sp.add_argument("path")
    sp.add_argument("--kind", choices=("schmidt", "slater"), default="schmidt")
    sp.add_argument("--cutoff", type=float, default=1e-10)
    sp.add_argument("--out")
    common(sp, budget=False)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("norm", help="q_K by closed form or certified bracket")
    sp.add_argument("path")
    measure(sp)
    sp.add_argument("--method", choices=("closed", "bracket"), default="bracket")
    sp.add_argument("--out", help="write witness/decomposition certificates here")
    common(sp)
    sp.set_defaults(func=cmd_norm)

    sp = sub.add_parser("verdict", help="separable / entangled / inconclusive")
    sp.add_argument("path")
    measure(sp)
    sp.add_argument("--tol", type=float, default=1e-6)
    common(sp)
    sp.set_defaults(func=cmd_verdict)

    sp = sub.add_parser("generate", help="write a canonical or random state file")
    sp.add_argument("name", choices=sorted(GENERATORS))
    sp.add_argument("--param", action="append", metavar="KEY=VALUE",
                    help="generator parameter, e.g. n=3 (repeatable)")
    sp.add_argument("--out")
    common(sp, budget=False)
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("repro", help="re-derive the reference values")
    sp.add_argument("case", nargs="?", default="all",
                    help=f"one of {', '.join(repro.CASES)} (comma-separated) or all")
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--l", type=int)
    common(sp)
    sp.set_defaults(func=cmd_repro)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EntgaugeError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
