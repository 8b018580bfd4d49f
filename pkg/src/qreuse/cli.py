"""Command-line front end: optimize, gen, bench, verify.

Exit codes: 0 success, 1 parse/validation error, 2 equivalence mismatch,
3 I/O error. Reports are JSON documents with a schema_version field.
"""

from __future__ import annotations

import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from . import bench, oracle, pipeline, qasm
from .pipeline import PassReport

SCHEMA_VERSION = 1

EXIT_PARSE = 1
EXIT_MISMATCH = 2
EXIT_IO = 3


def report_document(
    name: str,
    mode: str,
    report: PassReport,
    equivalence: dict | None = None,
) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "input": name,
        "mode": mode,
        "n_original": report.n_original,
        "n_reused": report.n_reused,
        "d_original": report.d_original,
        "d_reused": report.d_reused,
        "g2_original": report.g2_original,
        "g2_reused": report.g2_reused,
        "rule_counts": report.rule_counts,
        "reuse_count": report.reuse_count,
        "wall_time_seconds": report.wall_time,
    }
    if equivalence is not None:
        doc["equivalence"] = equivalence
    return doc


def _read_circuit(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        click.echo(f"error: cannot read {path}: {exc}", err=True)
        sys.exit(EXIT_IO)
    try:
        return qasm.parse(text)
    except qasm.QasmError as exc:
        click.echo(f"error: {path}: {exc}", err=True)
        sys.exit(EXIT_PARSE)


def _write_text(path: str, text: str) -> None:
    try:
        if path == "-":
            click.echo(text, nl=False)
        else:
            Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        click.echo(f"error: cannot write {path}: {exc}", err=True)
        sys.exit(EXIT_IO)


@click.group()
def main() -> None:
    """Reduce qubit counts of dynamic circuits by rewriting and reuse."""


@main.command()
@click.argument("input_path", type=str)
@click.option("--mode", type=click.Choice(pipeline.MODES), default="proposed", show_default=True)
@click.option("--output", "-o", default="-", show_default=True, help="Optimized circuit path ('-' for stdout).")
@click.option("--report", "report_path", default=None, help="Write a JSON report here.")
@click.option("--verify", is_flag=True, help="Check outcome equivalence with the exact simulator.")
@click.option("--tol", type=float, default=1e-9, show_default=True)
def optimize(input_path, mode, output, report_path, verify, tol):
    """Optimize a circuit file and write the result."""
    circuit = _read_circuit(input_path)
    result, rep = pipeline.optimize(circuit, mode=mode)
    equivalence = None
    if verify:
        try:
            ok, dev = oracle.equivalent(circuit, result, tol=tol)
        except oracle.SimulationLimitError as exc:
            click.echo(f"error: verification impossible: {exc}", err=True)
            sys.exit(EXIT_PARSE)
        equivalence = {"checked": True, "equivalent": ok, "max_deviation": dev, "tol": tol}
    _write_text(output, qasm.emit(result))
    if report_path:
        doc = report_document(circuit.name or input_path, mode, rep, equivalence)
        _write_text(report_path, json.dumps(doc, indent=2) + "\n")
    if equivalence is not None and not equivalence["equivalent"]:
        click.echo(f"equivalence FAILED: TV distance {equivalence['max_deviation']:.3e}", err=True)
        sys.exit(EXIT_MISMATCH)


@main.command()
@click.argument("family", type=click.Choice(["qpe", "qft", "vqe", "random"]))
@click.option("--n", type=int, default=4, show_default=True)
@click.option("--theta", type=float, default=2 * math.pi * 3 / 8, show_default=True, help="Phase for qpe.")
@click.option("--single-p", is_flag=True, help="qpe variant with a measured eigenstate qubit.")
@click.option("--strategy", type=click.Choice(bench.STRATEGIES), default="linear", show_default=True)
@click.option("--reps", type=int, default=1, show_default=True)
@click.option("--depth", "target_depth", type=int, default=4, show_default=True, help="Target depth for random.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--two-qubit-prob", type=float, default=0.5, show_default=True)
@click.option("--out", "-o", default="-", show_default=True)
def gen(family, n, theta, single_p, strategy, reps, target_depth, seed, two_qubit_prob, out):
    """Generate a benchmark circuit."""
    try:
        if family == "qpe":
            circuit = bench.gen_qpe(n, theta, single_p=single_p)
        elif family == "qft":
            circuit = bench.gen_qft(n)
        elif family == "vqe":
            circuit = bench.gen_vqe(n, strategy, reps=reps)
        else:
            circuit = bench.gen_random(
                bench.RandomSpec(n, target_depth, seed, two_qubit_prob=two_qubit_prob)
            )
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    _write_text(out, qasm.emit(circuit))


@main.command()
@click.argument("first")
@click.argument("second")
@click.option("--tol", type=float, default=1e-9, show_default=True)
def verify(first, second, tol):
    """Compare the outcome distributions of two circuit files."""
    a = _read_circuit(first)
    b = _read_circuit(second)
    try:
        ok, dev = oracle.equivalent(a, b, tol=tol)
    except (ValueError, oracle.SimulationLimitError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    click.echo(f"TV distance {dev:.3e} ({'<=' if ok else '>'} tol {tol:g})")
    if not ok:
        sys.exit(EXIT_MISMATCH)


def _bench_instances(family, sizes, strategies, depths, seeds, theta):
    if family == "qpe":
        return [(f"qpe{n}", lambda n=n: bench.gen_qpe(n, theta)) for n in sizes]
    if family == "qft":
        return [(f"qft{n}", lambda n=n: bench.gen_qft(n)) for n in sizes]
    if family == "vqe":
        return [
            (f"vqe-{s}{n}", lambda n=n, s=s: bench.gen_vqe(n, s))
            for n in sizes
            for s in strategies
        ]
    return [
        (
            f"random-n{n}-d{d}-s{seed}",
            lambda n=n, d=d, seed=seed: bench.gen_random(bench.RandomSpec(n, d, seed)),
        )
        for n, d in ((int(a), int(b)) for a, b in (pair.split("x") for pair in depths))
        for seed in seeds
    ]


@main.command("bench")
@click.option("--family", type=click.Choice(["qpe", "qft", "vqe", "random"]), required=True)
@click.option("--sizes", default="4,6,8", show_default=True, help="Comma-separated qubit counts.")
@click.option("--strategies", default=",".join(bench.STRATEGIES), show_default=True)
@click.option("--shapes", default="20x2", show_default=True, help="Random family: comma-separated NxD pairs.")
@click.option("--seeds", default="1,2,3,4,5", show_default=True)
@click.option("--theta", type=float, default=2 * math.pi * 3 / 8, show_default=True)
@click.option("--modes", default="proposed,baseline", show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--out-dir", default="bench-out", show_default=True)
def bench_cmd(family, sizes, strategies, shapes, seeds, theta, modes, jobs, out_dir):
    """Sweep a benchmark family and write per-instance and aggregate reports."""
    size_list = [int(s) for s in sizes.split(",") if s]
    strategy_list = [s for s in strategies.split(",") if s]
    seed_list = [int(s) for s in seeds.split(",") if s]
    mode_list = [m for m in modes.split(",") if m]
    shape_list = [s for s in shapes.split(",") if s]
    for mode in mode_list:
        if mode not in pipeline.MODES:
            click.echo(f"error: unknown mode {mode!r}", err=True)
            sys.exit(EXIT_PARSE)
    instances = _bench_instances(family, size_list, strategy_list, shape_list, seed_list, theta)

    def one(task):
        name, make, mode = task
        circuit = make()
        _, rep = pipeline.optimize(circuit, mode=mode)
        return report_document(name, mode, rep)

    tasks = [(name, make, mode) for name, make in instances for mode in mode_list]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            docs = list(pool.map(one, tasks))
    else:
        docs = [one(t) for t in tasks]

    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        for doc in docs:
            path = out / f"{doc['input']}-{doc['mode']}.json"
            path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        click.echo(f"error: cannot write reports: {exc}", err=True)
        sys.exit(EXIT_IO)

    # Aggregate means per (base instance, mode), seeds averaged out.
    groups: dict[tuple[str, str], list[dict]] = {}
    for doc in docs:
        base = doc["input"].split("-s")[0] if family == "random" else doc["input"]
        groups.setdefault((base, doc["mode"]), []).append(doc)
    rows = []
    for (base, mode), members in sorted(groups.items()):
        k = len(members)
        rows.append(
            {
                "instance": base,
                "mode": mode,
                "runs": k,
                "n_original": sum(d["n_original"] for d in members) / k,
                "n_reused": sum(d["n_reused"] for d in members) / k,
                "d_original": sum(d["d_original"] for d in members) / k,
                "d_reused": sum(d["d_reused"] for d in members) / k,
                "g2_original": sum(d["g2_original"] for d in members) / k,
                "g2_reused": sum(d["g2_reused"] for d in members) / k,
                "wall_time_seconds": sum(d["wall_time_seconds"] for d in members) / k,
            }
        )
    aggregate = {"schema_version": SCHEMA_VERSION, "family": family, "aggregate": rows}
    try:
        (out / "aggregate.json").write_text(json.dumps(aggregate, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        click.echo(f"error: cannot write aggregate: {exc}", err=True)
        sys.exit(EXIT_IO)
    header = f"{'instance':<24} {'mode':<9} {'n':>6} {'n_reused':>8} {'d':>7} {'d_reused':>8} {'g2':>7} {'g2_out':>7} {'t[s]':>8}"
    click.echo(header)
    for row in rows:
        click.echo(
            f"{row['instance']:<24} {row['mode']:<9} {row['n_original']:>6.1f} {row['n_reused']:>8.1f}"
            f" {row['d_original']:>7.1f} {row['d_reused']:>8.1f} {row['g2_original']:>7.1f}"
            f" {row['g2_reused']:>7.1f} {row['wall_time_seconds']:>8.4f}"
        )


if __name__ == "__main__":
    main()
