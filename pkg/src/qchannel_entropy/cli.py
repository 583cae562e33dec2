"""Command-line front end.

Usage:
    qchannel-entropy analyze CHANNEL.json [--state STATE.json | --bloch SX SY SZ] [--q Q ...] [--s S ...]
    qchannel-entropy verify [SUITE] [--seed 42] [--trials 200]
    qchannel-entropy example-depolarizing [--p 0.3] [--bloch SX SY SZ]

All subcommands take ``--format text|json`` and ``--out PATH``.
Exit status: 0 when every certificate holds, 1 when at least one fails,
2 on bad input or usage.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import bounds
from .channels import (
    apply,
    bloch_state,
    bloch_vector,
    completely_mixed,
    depolarizing,
    effect_probabilities,
    particular_outputs,
)
from .entropies import EntropyParams, density_spectrum, quantum_q_entropy, quantum_unified
from .exceptions import QChannelError, ValidationError
from .exchange import entanglement_fidelity, entropy_exchange, exchange_spectrum, map_entropy
from .io import dump_report, encode_matrix, load_channel, load_state
from .verify import SUITES, run_verification

DEFAULT_Q = (0.5, 1.0, 2.0, 3.0)
DEFAULT_S = (0.0, 0.5, 1.0, 2.0)
EXAMPLE_Q = (0.5, 1.0, 2.0, 3.0)
EXAMPLE_P = tuple(i / 10 for i in range(11))


def _floats(values) -> list[float]:
    return [float(v) for v in np.asarray(values, dtype=float).ravel()]


def build_analysis(channel, rho, q_grid, s_grid, source=None) -> dict:
    square = channel.dim_in == channel.dim_out
    output = apply(channel, rho)
    fidelity = entanglement_fidelity(channel, rho) if square else None
    rows, certs = [], []
    for q in q_grid:
        for s in s_grid:
            p = EntropyParams(q, s)
            row = {
                **p.as_dict(),
                "input_entropy": quantum_unified(rho, p),
                "output_entropy": quantum_unified(output, p),
                "entropy_exchange": entropy_exchange(channel, rho, p),
                "map_entropy": map_entropy(channel, p),
                "map_bound": bounds.map_bound_new(channel, p),
                "fano_general": None,
                "fano_simple": None,
            }
            certs.append(bounds.certify_prop4(channel, p))
            if square:
                row["fano_general"] = bounds.fano_bound_general(p.q, p.s, fidelity, channel.dim_in)
                certs.append(bounds.certify_prop3(channel, rho, p))
                if bounds.in_fano_simple_range(p):
                    row["fano_simple"] = bounds.fano_bound_simple(p.q, fidelity, channel.dim_in)
                    certs.append(bounds.certify_prop3(channel, rho, p, form="simple"))
            rows.append(row)
    return {
        "inputs": {
            "channel": {"dim_in": channel.dim_in, "dim_out": channel.dim_out, "kraus_count": len(channel), "source": source},
            "state": encode_matrix(rho),
            "grid": {"q": list(map(float, q_grid)), "s": list(map(float, s_grid))},
        },
        "quantities": {
            "effect_probabilities": _floats(effect_probabilities(channel, rho)),
            "output_state": encode_matrix(output),
            "entanglement_fidelity": fidelity,
            "exchange_spectrum": _floats(exchange_spectrum(channel, rho)),
            "entropies": rows,
        },
        "certificates": [c.to_dict() for c in certs],
    }


def build_depolarizing_example(p: float = 0.3, bloch=(0.0, 0.0, 0.5)) -> dict:
    channel = depolarizing(p)
    rho = bloch_state(bloch)
    spectrum = density_spectrum(rho)
    outputs = []
    certs = []
    for e in particular_outputs(channel, rho):
        out_spec = density_spectrum(e.state)
        outputs.append({
            "index": e.index,
            "probability": e.probability,
            "bloch": _floats(bloch_vector(e.state)),
            "spectrum": _floats(out_spec),
        })
        certs.append(bounds.certificate(
            "depolarizing_output_spectrum", float(np.max(np.abs(out_spec - spectrum))), 0.0, params={"effect": e.index, "p": p},
        ))
    expected = [1 - p, p / 3, p / 3, p / 3]
    certs.append(bounds.certificate(
        "depolarizing_probabilities", float(np.max(np.abs(effect_probabilities(channel, rho) - expected))), 0.0, params={"p": p},
    ))
    table = []
    for q in EXAMPLE_Q:
        regime = "f > 1 (bound violated)" if q < 1 else ("f = 1" if q == 1 else "f < 1")
        for pp in EXAMPLE_P:
            table.append({"q": q, "p": pp, "f": bounds.depolarizing_f(q, pp), "regime": regime if pp > 0 else "f = 1"})
        certs.extend(bounds.certify_depolarizing_f(q))
        if 0 < p and np.linalg.norm(bloch) < 1:
            certs.append(bounds.certify_depolarizing_state(q, p, rho))
    averages = [
        {"q": q, "q_average_output": bounds.q_average_output_entropy(channel, rho, q), "input_entropy": quantum_q_entropy(rho, q)}
        for q in EXAMPLE_Q
    ]
    return {
        "inputs": {"p": p, "bloch": _floats(bloch)},
        "quantities": {
            "input_spectrum": _floats(spectrum),
            "outputs": outputs,
            "q_averages": averages,
            "f_table": table,
        },
        "certificates": [c.to_dict() for c in certs],
    }


def _cert_line(c: dict) -> str:
    status = "PASS" if c["holds"] else "FAIL"
    return f"  [{status}] {c['name']}: lhs={c['lhs']:.12g} rhs={c['rhs']:.12g} slack={c['slack']:.3e} seed={c['seed']} params={c['params']}"


def _failed(report: dict) -> list[dict]:
    return [c for c in report["certificates"] if not c["holds"]]


def format_analysis_text(report: dict) -> str:
    q = report["quantities"]
    ch = report["inputs"]["channel"]
    lines = [
        f"channel: dim_in={ch['dim_in']} dim_out={ch['dim_out']} kraus_count={ch['kraus_count']}",
        "effect probabilities: " + ", ".join(f"{x:.6g}" for x in q["effect_probabilities"]),
        "exchange spectrum:    " + ", ".join(f"{x:.6g}" for x in q["exchange_spectrum"]),
    ]
    if q["entanglement_fidelity"] is not None:
        lines.append(f"entanglement fidelity: {q['entanglement_fidelity']:.10g}")
    lines.append("")
    lines.append(f"{'q':>5} {'s':>5} {'E(rho)':>12} {'E(out)':>12} {'exchange':>12} {'fano_gen':>12} {'fano_simple':>12} {'map':>12} {'map_bound':>12}")
    fmt = lambda v: f"{v:12.6g}" if v is not None else f"{'-':>12}"
    for r in q["entropies"]:
        lines.append(
            f"{r['q']:5g} {r['s']:5g} {fmt(r['input_entropy'])} {fmt(r['output_entropy'])} {fmt(r['entropy_exchange'])} "
            f"{fmt(r['fano_general'])} {fmt(r['fano_simple'])} {fmt(r['map_entropy'])} {fmt(r['map_bound'])}"
        )
    return "\n".join(lines + [""] + _certificate_summary(report))


def _certificate_summary(report: dict) -> list[str]:
    failed = _failed(report)
    lines = [f"certificates: {len(report['certificates'])} evaluated, {len(failed)} failed"]
    lines.extend(_cert_line(c) for c in failed)
    return lines


def format_verify_text(report: dict) -> str:
    lines = [f"verify {report['inputs']['suite']} seed={report['inputs']['seed']} trials={report['inputs']['trials']}"]
    for name, info in report["quantities"]["suites"].items():
        status = "PASS" if info["failed"] == 0 else "FAIL"
        lines.append(f"  [{status}] {name:<13} {info['certificates']:6d} certificates, {info['failed']} failed")
    return "\n".join(lines + _certificate_summary(report))


def format_example_text(report: dict) -> str:
    q = report["quantities"]
    inp = report["inputs"]
    lines = [
        f"depolarizing channel p={inp['p']:g}, input Bloch vector {inp['bloch']}",
        "input spectrum: " + ", ".join(f"{x:.6g}" for x in q["input_spectrum"]),
    ]
    for o in q["outputs"]:
        lines.append(
            f"  effect {o['index']}: probability {o['probability']:.6g}, Bloch {['%.4g' % x for x in o['bloch']]}, "
            f"spectrum {', '.join(f'{x:.6g}' for x in o['spectrum'])}"
        )
    for a in q["q_averages"]:
        lines.append(f"  q={a['q']:g}: q-average output entropy {a['q_average_output']:.8g} vs input entropy {a['input_entropy']:.8g}")
    lines.append("")
    lines.append(f"{'q':>5} {'p':>5} {'f_q(p)':>12}  regime")
    for r in q["f_table"]:
        lines.append(f"{r['q']:5g} {r['p']:5g} {r['f']:12.8f}  {r['regime']}")
    return "\n".join(lines + [""] + _certificate_summary(report))


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", type=Path, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="qchannel-entropy", description="Generalized-entropy characteristics of quantum channels."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="entropy report for one channel")
    a.add_argument("channel", type=Path, help="channel JSON file")
    state = a.add_mutually_exclusive_group()
    state.add_argument("--state", type=Path, help="state JSON file (default: completely mixed state)")
    state.add_argument("--bloch", type=float, nargs=3, metavar=("SX", "SY", "SZ"))
    a.add_argument("--q", type=float, action="append", help="entropic order q (repeatable)")
    a.add_argument("--s", type=float, action="append", help="unified-entropy parameter s (repeatable)")

    v = sub.add_parser("verify", parents=[common], help="run the certification suites")
    v.add_argument("suite", nargs="?", default="all", help=f"one of {', '.join([*SUITES, 'all'])}")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--trials", type=int, default=200)

    e = sub.add_parser("example-depolarizing", parents=[common], help="worked qubit depolarizing example")
    e.add_argument("--p", type=float, default=0.3)
    e.add_argument("--bloch", type=float, nargs=3, default=(0.0, 0.0, 0.5), metavar=("SX", "SY", "SZ"))
    return parser


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 after --help
        return int(exc.code or 0)
    try:
        if args.command == "analyze":
            channel = load_channel(args.channel)
            if args.state is not None:
                rho = load_state(args.state)
            elif args.bloch is not None:
                rho = bloch_state(args.bloch)
            else:
                rho = completely_mixed(channel.dim_in)
            if rho.shape[0] != channel.dim_in:
                raise ValidationError(f"state dimension {rho.shape[0]} does not match channel input dimension {channel.dim_in}")
            report = build_analysis(channel, rho, args.q or DEFAULT_Q, args.s or DEFAULT_S, source=str(args.channel))
            text_format = format_analysis_text
        elif args.command == "verify":
            if args.trials < 0:
                raise ValidationError("--trials must be nonnegative")
            report = run_verification(args.suite, args.seed, args.trials)
            text_format = format_verify_text
        else:
            report = build_depolarizing_example(args.p, tuple(args.bloch))
            text_format = format_example_text
    except QChannelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    text = dump_report(report) if args.format == "json" else text_format(report) + "\n"
    _emit(text, args.out)
    return 1 if _failed(report) else 0


if __name__ == "__main__":
    sys.exit(main())
