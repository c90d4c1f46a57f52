"""Command-line front end for compiling, verifying and inspecting pulse programs.

Subcommands: ``compile`` (truth table to pulse program), ``verify``
(pulse program against a truth table), ``compare`` (pulse counts across
labeling schemes), ``spectrum`` (equilibrium and final stick spectra)
and ``enumerate`` (count or list optimal chain labelings).

Operations are given as truth-table files or as the built-in names
``fulladder4``, ``swap:i,j`` and ``identity:N``; several compose left to
right.  All output is deterministic: the same configuration and inputs
give byte-identical reports.

Exit codes: 0 success, 2 parse or format error, 3 synthesis failure,
4 verification failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field

from . import labeler, simulator, synthesizer
from .permutation import (
    Permutation,
    TruthTableError,
    builtin_operation,
    compose,
    maximal_sets,
    min_pulse_count,
    count_optimal_labelings,
    parse_truth_table,
)
from .labeler import RelabelError
from .synthesizer import SynthesisError
from .topology import QUADRUPOLAR_CHAIN, SPIN_HALF_HYPERCUBE, build_topology

__all__ = ["RunConfig", "main"]

TOPOLOGY_ALIASES = {
    "chain": QUADRUPOLAR_CHAIN,
    "hypercube": SPIN_HALF_HYPERCUBE,
}

CHAIN_SCHEMES = ("ols", "cl", "gray")
HYPERCUBE_SCHEMES = ("pairswap", "parallel", "cl")

EXIT_OK = 0
EXIT_FORMAT = 2
EXIT_SYNTHESIS = 3
EXIT_VERIFY = 4


@dataclass
class RunConfig:
    """Everything one subcommand run depends on."""

    command: str
    topology: str = QUADRUPOLAR_CHAIN
    labeling: str | None = None
    operations: list[str] = field(default_factory=list)
    qubits: int | None = None
    output: str | None = None
    depth_cap: int | None = None
    limit: int | None = None
    show: int = 0
    ascii_bars: bool = False
    program: str | None = None
    labeling_table: str | None = None


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _resolve_operations(cfg: RunConfig) -> tuple[Permutation, str]:
    """Compose the operation tokens left to right into one permutation."""
    if not cfg.operations:
        raise CliError("no operation given", EXIT_FORMAT)
    n = cfg.qubits
    for token in cfg.operations:
        if os.path.exists(token):
            with open(token, encoding="utf-8") as fh:
                n = n or parse_truth_table(fh.read()).n_qubits
        elif token == "fulladder4":
            n = n or 4
        elif token.startswith("identity:"):
            n = n or int(token.split(":", 1)[1])
    if n is None:
        raise CliError("qubit count could not be inferred; pass --qubits", EXIT_FORMAT)

    perms = []
    for token in cfg.operations:
        if os.path.exists(token):
            with open(token, encoding="utf-8") as fh:
                perms.append(parse_truth_table(fh.read()))
        else:
            try:
                perms.append(builtin_operation(token, n))
            except ValueError as exc:
                raise CliError(str(exc), EXIT_FORMAT) from exc
        if perms[-1].n_qubits != n:
            raise CliError(
                "operation {!r} acts on {} qubits, expected {}".format(
                    token, perms[-1].n_qubits, n
                ),
                EXIT_FORMAT,
            )
    combined = perms[0]
    for extra in perms[1:]:
        combined = compose(combined, extra)
    return combined, "+".join(cfg.operations)


def _default_labeling(cfg: RunConfig) -> str:
    if cfg.labeling:
        return cfg.labeling
    return "ols" if cfg.topology == QUADRUPOLAR_CHAIN else "pairswap"


def _check_scheme(cfg: RunConfig, name: str) -> None:
    allowed = CHAIN_SCHEMES if cfg.topology == QUADRUPOLAR_CHAIN else HYPERCUBE_SCHEMES
    if name not in allowed:
        raise CliError(
            "labeling {!r} is not valid for {} (choose from {})".format(
                name, cfg.topology, ", ".join(allowed)
            ),
            EXIT_FORMAT,
        )


def _write_outputs(cfg: RunConfig, files: dict[str, str]) -> None:
    if cfg.output is None:
        return
    os.makedirs(cfg.output, exist_ok=True)
    for name, text in files.items():
        with open(os.path.join(cfg.output, name), "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def cmd_compile(cfg: RunConfig) -> int:
    p, op_name = _resolve_operations(cfg)
    name = _default_labeling(cfg)
    _check_scheme(cfg, name)
    t = build_topology(cfg.topology, p.n_qubits)
    d = maximal_sets(p)
    scheme, seq = synthesizer.synthesize_named(name, p, d, t, cfg.depth_cap)
    scheduled = synthesizer.schedule_rounds(seq)
    table = labeler.serialize_labeling(scheme.labeling, t)
    program = synthesizer.serialize_pulse_program(scheduled)
    report = "\n".join(
        [
            "command: compile",
            "operation: {}".format(op_name),
            "topology: {}".format(cfg.topology),
            "labeling: {}".format(name),
            "qubits: {}".format(p.n_qubits),
            "sets: {}".format(len(d.sets)),
            "minimum-pulses: {}".format(min_pulse_count(d)),
            "pulses: {}".format(len(scheduled)),
            "rounds: {}".format(len(scheduled.rounds)),
        ]
    )
    _write_outputs(
        cfg,
        {"report.txt": report, "labeling.txt": table, "program.txt": program},
    )
    print(report)
    print()
    print("labeling-table:")
    print(table)
    print()
    print("pulse-program:")
    print(program if program else "(empty)")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    p, op_name = _resolve_operations(cfg)
    t = build_topology(cfg.topology, p.n_qubits)
    try:
        with open(cfg.labeling_table, encoding="utf-8") as fh:
            labeling = labeler.parse_labeling(fh.read(), t)
        with open(cfg.program, encoding="utf-8") as fh:
            seq = synthesizer.parse_pulse_program(fh.read(), t, labeling)
    except (OSError, ValueError) as exc:
        raise CliError(str(exc), EXIT_FORMAT) from exc
    scheme = labeler.fixed_scheme(labeling, "external")
    u = simulator.sequence_unitary(seq)
    verdict = simulator.verify_permutation(u, p, scheme)
    lines = [
        "command: verify",
        "operation: {}".format(op_name),
        "verdict: {}".format("PASS" if verdict.passed else "FAIL"),
        "realized: {}".format(" ".join(str(x) for x in verdict.realized)),
        "phases: {}".format(" ".join(_fmt_phase(ph) for ph in verdict.phases)),
    ]
    for problem in verdict.problems:
        lines.append("problem: {}".format(problem))
    print("\n".join(lines))
    return EXIT_OK if verdict.passed else EXIT_VERIFY


def _fmt_phase(ph: complex) -> str:
    if abs(ph.imag) < 1e-12:
        return "{:+g}".format(ph.real)
    return "{:+g}{:+g}j".format(ph.real, ph.imag)


def cmd_compare(cfg: RunConfig) -> int:
    p, op_name = _resolve_operations(cfg)
    t = build_topology(cfg.topology, p.n_qubits)
    report = synthesizer.pulse_count_report(p, t, cfg.depth_cap)
    lines = [
        "command: compare",
        "operation: {}".format(op_name),
        "topology: {}".format(cfg.topology),
        "qubits: {}".format(p.n_qubits),
        "scheme  pulses  rounds",
    ]
    for name in report.counts:
        lines.append(
            "{}  {}  {}".format(name, report.counts[name], report.rounds[name])
        )
    for note in report.notes:
        lines.append("note: {}".format(note))
    print("\n".join(lines))
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig) -> int:
    p, op_name = _resolve_operations(cfg)
    name = _default_labeling(cfg)
    _check_scheme(cfg, name)
    t = build_topology(cfg.topology, p.n_qubits)
    d = maximal_sets(p)
    scheme, _ = synthesizer.synthesize_named(name, p, d, t, cfg.depth_cap)
    eq = simulator.equilibrium_populations(t, scheme)
    fin = simulator.final_populations(eq, p, scheme)
    parts = [
        "command: spectrum",
        "operation: {}".format(op_name),
        "topology: {}".format(cfg.topology),
        "labeling: {}".format(name),
        "qubits: {}".format(p.n_qubits),
        "",
        "equilibrium:",
        simulator.serialize_spectrum(
            simulator.stick_spectrum(eq, t, scheme), cfg.ascii_bars
        ),
        "",
        "final:",
        simulator.serialize_spectrum(
            simulator.stick_spectrum(fin, t, scheme), cfg.ascii_bars
        ),
    ]
    print("\n".join(parts))
    return EXIT_OK


def cmd_enumerate(cfg: RunConfig) -> int:
    p, op_name = _resolve_operations(cfg)
    if cfg.topology != QUADRUPOLAR_CHAIN:
        raise CliError("enumeration applies to the quadrupolar chain", EXIT_FORMAT)
    t = build_topology(cfg.topology, p.n_qubits)
    d = maximal_sets(p)
    lines = [
        "command: enumerate",
        "operation: {}".format(op_name),
        "qubits: {}".format(p.n_qubits),
        "formula-count: {}".format(count_optimal_labelings(d)),
    ]
    count = 0
    shown = []
    for scheme in labeler.enumerate_ols_quadrupolar(d, t, cfg.limit):
        count += 1
        if count <= cfg.show:
            labels = " ".join(
                scheme.labeling.label_bits(lv) for lv in range(t.level_count)
            )
            shown.append("scheme {}: {}".format(count, labels))
    lines.append("enumerated: {}".format(count))
    lines.extend(shown)
    print("\n".join(lines))
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="levelpulse",
        description="Compile reversible truth tables to transition-selective pulse sequences.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, labeling=False):
        sp.add_argument("operations", nargs="+", metavar="OPERATION",
                        help="truth-table file, fulladder4, swap:i,j or identity:N")
        sp.add_argument("--topology", choices=sorted(TOPOLOGY_ALIASES), default="chain")
        sp.add_argument("--qubits", type=int, default=None)
        sp.add_argument("--depth-cap", type=int, default=None, dest="depth_cap")
        if labeling:
            sp.add_argument(
                "--labeling",
                choices=sorted(set(CHAIN_SCHEMES + HYPERCUBE_SCHEMES)),
                default=None,
                help="defaults to ols on the chain, pairswap on the hypercube",
            )

    sp = sub.add_parser("compile", help="emit a pulse program and labeling table")
    common(sp, labeling=True)
    sp.add_argument("--output", default=None, metavar="DIR",
                    help="also write report.txt, labeling.txt and program.txt here")

    sp = sub.add_parser("verify", help="check a pulse program against a truth table")
    common(sp)
    sp.add_argument("--program", required=True)
    sp.add_argument("--labeling-table", required=True, dest="labeling_table")

    sp = sub.add_parser("compare", help="pulse counts across labeling schemes")
    common(sp)

    sp = sub.add_parser("spectrum", help="equilibrium and final stick spectra")
    common(sp, labeling=True)
    sp.add_argument("--ascii", action="store_true", dest="ascii_bars")

    sp = sub.add_parser("enumerate", help="count or list optimal chain labelings")
    common(sp)
    sp.add_argument("--limit", type=int, default=None)
    sp.add_argument("--show", type=int, default=0)

    return parser


_HANDLERS = {
    "compile": cmd_compile,
    "verify": cmd_verify,
    "compare": cmd_compare,
    "spectrum": cmd_spectrum,
    "enumerate": cmd_enumerate,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        topology=TOPOLOGY_ALIASES[args.topology],
        labeling=getattr(args, "labeling", None),
        operations=list(args.operations),
        qubits=args.qubits,
        output=getattr(args, "output", None),
        depth_cap=args.depth_cap,
        limit=getattr(args, "limit", None),
        show=getattr(args, "show", 0),
        ascii_bars=getattr(args, "ascii_bars", False),
        program=getattr(args, "program", None),
        labeling_table=getattr(args, "labeling_table", None),
    )
    try:
        return _HANDLERS[cfg.command](cfg)
    except CliError as exc:
        print("error: {}".format(exc), file=sys.stderr)
        return exc.code
    except TruthTableError as exc:
        print("error: {}".format(exc), file=sys.stderr)
        return EXIT_FORMAT
    except (RelabelError, SynthesisError) as exc:
        print("error: {}".format(exc), file=sys.stderr)
        return EXIT_SYNTHESIS
    except OSError as exc:
        print("error: {}".format(exc), file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
