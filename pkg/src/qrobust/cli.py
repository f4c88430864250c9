"""Command-line interface.

Subcommands: ``metric`` (distance between two configured laws), ``simulate``
(emit a path as CSV), ``mixing-bound`` (closed-form mixing profile value),
and the experiment runners ``ugc | robustness | rio-check | lln-check |
bracket-check`` (read a JSON config, write the ResultTable CSV plus a JSON
run manifest). Exit codes: 0 success, 1 configuration/usage error, 2
experiment assertion failure (a reported bound or monotonicity violation).
"""

from __future__ import annotations

import argparse
import json
import sys

from .distributions import distribution_from_config
from .errors import QrobustError
from .lab import ExperimentConfig, parse_metric, run_experiment
from .processes import LinearProcessSpec, mixing_bound, simulate_linear, spec_from_config

_EXPERIMENTS = ("ugc", "robustness", "rio-check", "lln-check", "bracket-check")


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; config errors are exit 1 here
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _build_parser() -> _Parser:
    parser = _Parser(prog="qrobust", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_metric = sub.add_parser("metric", help="distance between two configured laws")
    p_metric.add_argument("--kind", required=True,
                          help="metric descriptor: levy | kolmogorov-phi:GAUGE | "
                               "psi-vague:GAUGE | psi-levy:GAUGE")
    p_metric.add_argument("--mu", required=True, help="first law as JSON")
    p_metric.add_argument("--nu", required=True, help="second law as JSON")

    p_sim = sub.add_parser("simulate", help="emit a simulated path as CSV")
    p_sim.add_argument("--spec", required=True, help="process spec as JSON")
    p_sim.add_argument("--n", required=True, type=int)
    p_sim.add_argument("--seed", required=True, type=int)
    p_sim.add_argument("--s-max", type=int, default=None)
    p_sim.add_argument("--out", default="-", help="output path, - for stdout")

    p_mix = sub.add_parser("mixing-bound", help="closed-form mixing bound at lag n")
    p_mix.add_argument("--phi", type=float, nargs="*", default=[])
    p_mix.add_argument("--theta", type=float, nargs="*", default=[])
    p_mix.add_argument("--n", required=True, type=int)
    p_mix.add_argument("--noise", default='{"kind":"gaussian","mean":0,"sd":1}',
                       help="noise law as JSON")
    p_mix.add_argument("--m-const", type=float, default=None,
                       help="override the noise density smoothness constant")

    for name in _EXPERIMENTS:
        p_exp = sub.add_parser(name, help=f"run the {name} experiment")
        p_exp.add_argument("--config", required=True, help="experiment config JSON file")
        p_exp.add_argument("--out", required=True, help="ResultTable CSV path")
        p_exp.add_argument("--manifest", default=None,
                           help="manifest JSON path (default: <out>.manifest.json)")
    return parser


def _load_json(text: str, what: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise _UsageError(f"{what} is not valid JSON: {exc}")


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        if args.command == "metric":
            handle = parse_metric(args.kind)
            mu = distribution_from_config(_load_json(args.mu, "--mu"))
            nu = distribution_from_config(_load_json(args.nu, "--nu"))
            print(f"{handle.value(mu, nu):.17g}")
            return 0
        if args.command == "simulate":
            spec = spec_from_config(_load_json(args.spec, "--spec"))
            path = simulate_linear(spec, args.n, args.seed, s_max=args.s_max)
            text = "x\n" + "\n".join(f"{v:.17g}" for v in path) + "\n"
            if args.out == "-":
                sys.stdout.write(text)
            else:
                with open(args.out, "w", encoding="utf-8", newline="") as fh:
                    fh.write(text)
            return 0
        if args.command == "mixing-bound":
            noise = distribution_from_config(_load_json(args.noise, "--noise"))
            spec = LinearProcessSpec.arma(args.phi, args.theta, noise, args.m_const)
            print(f"{mixing_bound(spec, args.n):.17g}")
            return 0
        # experiment subcommands
        with open(args.config, "r", encoding="utf-8") as fh:
            config = ExperimentConfig.from_json(fh.read())
        if config.kind != args.command:
            raise _UsageError(
                f"config kind {config.kind!r} does not match subcommand {args.command!r}"
            )
        table = run_experiment(config)
        table.write(args.out, args.manifest)
        for violation in table.violations:
            print(f"violation: {violation}", file=sys.stderr)
        return 2 if table.violations else 0
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except QrobustError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
