"""Command-line interface: simulate | train | evaluate | infer | serve.

All subcommands exit 0 on success and nonzero with a one-line diagnostic on
stderr otherwise. Every seed defaults to DEFAULT_SEED (1729) so documented
invocations reproduce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path

from .errors import ProfilerNetError
from .fileio import (
    load_cases,
    load_network,
    report_to_text,
    resolve_state,
    save_cases,
    save_network,
    save_report,
)
from .inference import posterior_ve, predict
from .learning import DEFAULT_SEED, StructureSearchConfig, fit_parameters, learn_structure
from .model import Network
from .profiling import PipelineConfig, evaluate, run_pipeline
from .sampling import SampleSeed, simulate_dataset


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="profilernet",
        description="Discrete probabilistic-network toolkit for offender-profile inference.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="sample solved cases from a network file")
    p.add_argument("--network", required=True, help="network file (.pnet)")
    p.add_argument("--cases", required=True, type=int, help="number of cases to simulate")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True, help="output case file (.csv)")
    p.add_argument("--numbers", action="store_true",
                   help="write 1-based state numbers instead of labels")

    p = sub.add_parser("train", help="fit a network from complete solved cases")
    p.add_argument("--cases", required=True, help="training case file")
    p.add_argument("--network", required=True,
                   help="hypothesis network file providing the variable catalog and structure")
    p.add_argument("--learn-structure", action="store_true",
                   help="hill-climb the structure instead of keeping the hypothesis edges")
    p.add_argument("--alpha", type=float, default=1.0, help="Dirichlet pseudo-count (default 1)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--max-parents", type=int, default=3)
    p.add_argument("--restarts", type=int, default=3)
    p.add_argument("--tier-constraint", action="store_true",
                   help="forbid crime-scene -> offender edges during structure search")
    p.add_argument("--out", required=True, help="output network file")

    p = sub.add_parser("evaluate", help="train/validate split evaluation, or score a trained model")
    p.add_argument("--network", required=True, help="hypothesis (or trained) network file")
    p.add_argument("--cases", required=True, help="complete solved-case file")
    p.add_argument("--split", type=float, default=0.8,
                   help="training fraction for the random split (default 0.8)")
    p.add_argument("--no-split", action="store_true",
                   help="treat the network as already trained and score it on every case")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--learn-structure", action="store_true")
    p.add_argument("--report-out", help="write the text report here as well as stdout")
    p.add_argument("--json-out", help="write the machine-readable report here")
    p.add_argument("--model-out", help="write the trained network here")

    p = sub.add_parser("infer", help="posteriors and predictions from evidence")
    p.add_argument("--network", required=True)
    p.add_argument("-e", "--evidence", action="append", default=[], metavar="VAR=STATE",
                   help="observed variable (state label or 1-based number); repeatable")
    p.add_argument("--all", action="store_true",
                   help="report every non-evidence variable, not just output-role ones")

    p = sub.add_parser("serve", help="run the HTTP inference service")
    p.add_argument("--network", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8421)

    return parser


def _cmd_simulate(args) -> int:
    net = load_network(args.network)
    data = simulate_dataset(net, args.cases, SampleSeed(args.seed))
    save_cases(data, net, args.out, labels=not args.numbers)
    print(f"simulated {len(data)} cases (seed {args.seed}) -> {args.out}")
    if len(data):
        for v in net.variables:
            col = data.column(v.id)
            marginals = " ".join(
                f"{label}={(col == s).mean():.4f}" for s, label in enumerate(v.states)
            )
            print(f"  {v.id}: {marginals}")
    return 0


def _train_network(args, net: Network, data) -> Network:
    if args.learn_structure:
        cfg = StructureSearchConfig(
            max_parents=args.max_parents,
            restarts=args.restarts,
            tier_constraint=args.tier_constraint,
            seed=args.seed,
            initial_edges=net.structure.edges,
        )
        structure = learn_structure(data, net.variables, cfg)
        source = "learned"
    else:
        structure = net.structure
        source = "given"
    digest = hashlib.sha256(Path(args.cases).read_bytes()).hexdigest()
    metadata = dict(net.metadata)
    metadata.update({
        "version": "trained",
        "source_file": Path(args.cases).name,
        "source_sha256": digest,
        "n_cases": str(len(data)),
        "alpha": repr(args.alpha),
        "seed": str(args.seed),
        "structure": source,
    })
    return fit_parameters(structure, net.variables, data, args.alpha, metadata)


def _cmd_train(args) -> int:
    net = load_network(args.network)
    data = load_cases(args.cases, net, allow_missing=False)
    if len(data) == 0:
        raise ProfilerNetError(f"case file '{args.cases}' contains no cases")
    trained = _train_network(args, net, data)
    save_network(trained, args.out)
    print(f"trained on {len(data)} cases (alpha={args.alpha}, structure {trained.metadata['structure']}) -> {args.out}")
    return 0


def _cmd_evaluate(args) -> int:
    net = load_network(args.network)
    data = load_cases(args.cases, net, allow_missing=False)
    if args.no_split:
        report = evaluate(net, data, {
            "model": net.metadata.get("name", "unnamed"),
            "mode": "pretrained",
            "cases": Path(args.cases).name,
        })
        trained = net
    else:
        config = PipelineConfig(
            train_fraction=args.split,
            alpha=args.alpha,
            seed=args.seed,
            learn_structure=args.learn_structure,
            structure=net.structure,
        )
        trained, report = run_pipeline(data, net.variables, config)
        report.metadata.setdefault("model", net.metadata.get("name", "unnamed"))
    sys.stdout.write(report_to_text(report))
    save_report(report,
                text_path=args.report_out or None,
                json_path=args.json_out or None)
    if args.model_out:
        save_network(trained, args.model_out)
    return 0


def _parse_evidence(net: Network, pairs: list[str]) -> dict[str, int]:
    evidence: dict[str, int] = {}
    for pair in pairs:
        if "=" not in pair:
            raise ProfilerNetError(f"evidence must be VAR=STATE, got '{pair}'")
        var_id, _, token = pair.partition("=")
        var_id = var_id.strip()
        if var_id not in set(net.var_ids):
            raise ProfilerNetError(f"unknown variable '{var_id}'")
        if var_id in evidence:
            raise ProfilerNetError(f"variable '{var_id}' given more than once")
        evidence[var_id] = resolve_state(net.variable(var_id), token.strip())
    return evidence


def _cmd_infer(args) -> int:
    net = load_network(args.network)
    evidence = _parse_evidence(net, args.evidence)
    targets = [v for v in net.output_ids if v not in evidence]
    if args.all or not targets:
        targets = [v for v in net.var_ids if v not in evidence]
    if evidence:
        shown = " ".join(
            f"{var_id}={net.variable(var_id).states[s]}" for var_id, s in evidence.items()
        )
        print(f"evidence: {shown}")
    else:
        print("evidence: (none)")
    for var_id in targets:
        posterior = posterior_ve(net, evidence, var_id)
        pred = predict(posterior)
        probs = ", ".join(f"{p:.12g}" for p in posterior.probs)
        label = net.variable(var_id).states[pred.predicted_state]
        print(f"{var_id}: posterior [{probs}] -> {label} (confidence {pred.confidence:.12g})")
    return 0


def _cmd_serve(args) -> int:
    from .service import run_server

    net = load_network(args.network)
    print(f"serving '{net.metadata.get('name', 'unnamed')}' on http://{args.host}:{args.port}")
    run_server(net, args.host, args.port)
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "train": _cmd_train,
    "evaluate": _cmd_evaluate,
    "infer": _cmd_infer,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ProfilerNetError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
