"""
================================================================================
GH-LAB CLI - Punto de entrada único
================================================================================

Subcomandos:
    construct {cantor,telescope,u-space,triple,inflate}   Construye espacios
    gh {exact,bound}                                      Distancia GH
    analyze                                               Invariantes
    geodesic {straight,bunch}                             Geodésicas y haces
    reproduce                                             Batería de aceptación

Códigos de salida: 0 éxito, 1 fallo de verificación, 2 entrada inválida.
Todo JSON emitido lleva "schema": 1 y claves ordenadas.

Uso:
    python app.py construct cantor --c 0.5 --depth 3 -o c.json
    python app.py gh exact a.json b.json
    python app.py reproduce --out results/

Autor: GH-Lab
Versión: 1.0
================================================================================
"""

import csv
import functools
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

import click
import numpy as np

from acceptance import reproduce_all
from config import SCHEMA_VERSION, get_settings
from constructors import (
    CubePoint,
    cantor_beta,
    isosceles_triple,
    load_tail_spec,
    load_telescope_spec,
    net_inflation,
    space_from_entry,
    telescope,
    u_space,
)
from errors import GeodesicViolation, GhLabError, InvalidParameter, MalformedMatrix
from geodesics import (
    BunchSlice,
    StraightGeodesic,
    build_branch_spec,
    Verdict,
    bunch_distinctness,
    verify_geodesic,
)
from geometry_analysis import analyze as analyze_space
from geometry_analysis import depth_sweep
from gh_solver import gh_exact, gh_upper_local
from metric_core import dump_space, load_space

logger = logging.getLogger(__name__)


# =============================================================================
# UTILIDADES
# =============================================================================

def _write_json(data: Dict, output: Optional[str]) -> None:
    payload = dict(data)
    payload["schema"] = SCHEMA_VERSION
    text = json.dumps(payload, sort_keys=True, indent=2, default=float) + "\n"
    if output:
        target = Path(output)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text)
        logger.info(f"Escrito {target}")
    else:
        click.echo(text, nl=False)


def _write_csv(rows: List[Dict], columns: List[str], output: str) -> None:
    target = Path(output)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=columns, extrasaction="ignore")
        writer.writeheader()
        writer.writerows(rows)
    logger.info(f"Escrito {target}")


def _emit_space(space, output: Optional[str]) -> None:
    if output:
        dump_space(space, output)
        click.echo(f"{space.n} puntos -> {output}")
    else:
        _write_json({"labels": list(space.labels), "dist": space.dist.tolist()}, None)


def handle_errors(func):
    """Traduce las excepciones del proyecto a códigos de salida"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except GhLabError as e:
            logger.error(f"{type(e).__name__}: {e}")
            click.echo(f"Error ({type(e).__name__}): {e}", err=True)
            sys.exit(e.exit_code)

    return wrapper


# =============================================================================
# GRUPO PRINCIPAL
# =============================================================================

@click.group()
@click.option("--verbose", is_flag=True, help="Logging a nivel DEBUG")
def cli(verbose: bool):
    """GH-Lab: espacios métricos finitos y geodésicas de Gromov-Hausdorff"""
    level = logging.DEBUG if verbose else getattr(logging, get_settings().log_level, logging.INFO)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


# =============================================================================
# CONSTRUCT
# =============================================================================

@cli.group()
def construct():
    """Construye espacios y los escribe en JSON"""


@construct.command("cantor")
@click.option("--c", "c", type=float, default=0.5, show_default=True)
@click.option("--depth", type=int, default=3, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False))
@handle_errors
def construct_cantor(c, depth, output):
    _emit_space(cantor_beta(c, depth), output)


@construct.command("telescope")
@click.argument("spec_file", type=click.Path())
@click.option("-o", "--output", type=click.Path(dir_okay=False))
@handle_errors
def construct_telescope(spec_file, output):
    _emit_space(telescope(load_telescope_spec(spec_file)), output)


@construct.command("u-space")
@click.argument("spec_file", type=click.Path())
@click.option("-o", "--output", type=click.Path(dir_okay=False))
@handle_errors
def construct_u_space(spec_file, output):
    _emit_space(u_space(load_tail_spec(spec_file)), output)


@construct.command("triple")
@click.option("--j", "j", type=int, default=1, show_default=True)
@click.option("--q", "q", type=float, default=0.0, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False))
@handle_errors
def construct_triple(j, q, output):
    _emit_space(isosceles_triple(j, q), output)


@construct.command("inflate")
@click.argument("space_file", type=click.Path())
@click.option("--eps", type=float, required=True)
@click.option("--c", "c", type=float, default=0.5, show_default=True)
@click.option("--depth", type=int, default=2, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False))
@handle_errors
def construct_inflate(space_file, eps, c, depth, output):
    """Sustituye cada punto de una ε-red por una copia de cantor_beta(c, depth)"""
    result = net_inflation(load_space(space_file), eps, cantor_beta(c, depth))
    _emit_space(result.space, output)


# =============================================================================
# GH
# =============================================================================

@cli.group()
def gh():
    """Distancia de Gromov-Hausdorff"""


@gh.command("exact")
@click.argument("a_file", type=click.Path())
@click.argument("b_file", type=click.Path())
@click.option("--budget", type=int, default=None, help="Nodos del branch-and-bound")
@click.option("--strict", is_flag=True, help="Salida 1 si se agota el presupuesto")
@click.option("-o", "--output", type=click.Path(dir_okay=False))
@handle_errors
def gh_exact_cmd(a_file, b_file, budget, strict, output):
    result = gh_exact(load_space(a_file), load_space(b_file), budget=budget, strict=strict)
    _write_json(result.to_dict(), output)


@gh.command("bound")
@click.argument("a_file", type=click.Path())
@click.argument("b_file", type=click.Path())
@click.option("--restarts", type=int, default=None)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False))
@handle_errors
def gh_bound_cmd(a_file, b_file, restarts, seed, output):
    result = gh_upper_local(load_space(a_file), load_space(b_file), restarts=restarts, seed=seed)
    _write_json(result.to_dict(), output)


# =============================================================================
# ANALYZE
# =============================================================================

@cli.command()
@click.argument("space_file", type=click.Path(), required=False)
@click.option("--t", "t", type=float, default=None, help="Resolución (por defecto la separación)")
@click.option("--sweep-depth", is_flag=True, help="Barrido de profundidad de cantor_beta")
@click.option("--c", "c", type=float, default=0.5, show_default=True)
@click.option("--depth", type=int, default=8, show_default=True, help="Profundidad máxima del barrido")
@click.option("-o", "--output", type=click.Path(dir_okay=False))
@handle_errors
def analyze(space_file, t, sweep_depth, c, depth, output):
    """Informe de invariantes (JSON) o barrido de profundidad (CSV)"""
    if sweep_depth:
        rows = depth_sweep(c, range(2, depth + 1))
        columns = ["depth", "points", "ud_constant", "up_constant", "assouad"]
        if output:
            _write_csv(rows, columns, output)
        else:
            writer = csv.DictWriter(sys.stdout, fieldnames=columns)
            writer.writeheader()
            writer.writerows(rows)
        return
    if space_file is None:
        raise InvalidParameter("space_file", None, "se necesita un espacio o --sweep-depth")
    _write_json(analyze_space(load_space(space_file), t).to_dict(), output)


# =============================================================================
# GEODESIC
# =============================================================================

@cli.group()
def geodesic():
    """Verificación de geodésicas"""


@geodesic.command("straight")
@click.argument("a_file", type=click.Path())
@click.argument("b_file", type=click.Path())
@click.option("--grid", type=int, default=11, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False))
@click.option("--csv", "csv_output", type=click.Path(dir_okay=False))
@handle_errors
def geodesic_straight(a_file, b_file, grid, output, csv_output):
    family = StraightGeodesic.from_endpoints(load_space(a_file), load_space(b_file))
    try:
        report = verify_geodesic(family, np.linspace(0.0, 1.0, grid))
    except GeodesicViolation as e:
        if e.report is not None:
            _write_json(e.report.to_dict(), output)
        raise
    _write_json(report.to_dict(), output)
    if csv_output:
        _write_csv(report.rows, ["s", "t", "upper", "lower", "bound"], csv_output)


def _load_bunch_spec(path: str):
    """{"X", "Y", "A", "J", "tail", "factor", "o"}; X, Y y factor como entradas de espacio"""
    source = Path(path)
    if not source.is_file():
        raise MalformedMatrix(f"No existe el fichero {source}")
    try:
        data = json.loads(source.read_text())
    except json.JSONDecodeError as e:
        raise MalformedMatrix(f"{source}: JSON inválido ({e})")
    base_dir = source.parent
    factor = space_from_entry(data["factor"], base_dir) if "factor" in data else None
    return build_branch_spec(
        space_from_entry(data["X"], base_dir),
        space_from_entry(data["Y"], base_dir),
        A=tuple(data.get("A", (0.0, 0.5, 1.0))),
        factor=factor,
        J=int(data.get("J", 1)),
        tail=data.get("tail", "point"),
        o=int(data.get("o", 0)),
    )


@geodesic.command("bunch")
@click.argument("spec_file", type=click.Path())
@click.option("--s-grid", type=int, default=11, show_default=True)
@click.option("--q-samples", type=int, default=8, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False))
@click.option("--csv", "csv_output", type=click.Path(dir_okay=False))
@handle_errors
def geodesic_bunch(spec_file, s_grid, q_samples, seed, output, csv_output):
    """Condiciones del haz: extremos, ramas, geodésicas y distinción"""
    spec = _load_bunch_spec(spec_file)
    rng = np.random.default_rng(seed)
    grid = np.union1d(np.linspace(0.0, 1.0, s_grid), spec.A)
    qs = [CubePoint(tuple(rng.uniform(0.0, 1.0, size=spec.tail.J))) for _ in range(q_samples)]
    slices = [BunchSlice(spec, q) for q in qs]

    X, Y = spec.base.X, spec.base.Y
    endpoints = all(f.point(0.0).same_matrix(X) and f.point(1.0).same_matrix(Y) for f in slices)
    branches = all(
        f.point(a).same_matrix(slices[0].point(a)) for a in spec.A for f in slices
    )

    rows, violation = [], None
    for q, family in zip(qs, slices):
        try:
            report = verify_geodesic(family, grid)
        except GeodesicViolation as e:
            violation = violation or e
            report = e.report
        rows.extend(dict(row, q=list(q.coords)) for row in report.rows)

    off = [float(s) for s in grid if s not in spec.A]
    samples = [(off[int(rng.integers(len(off)))], q) for q in qs] if off else []
    # una muestra repetida es el mismo punto, no un par a separar
    samples = list(dict.fromkeys(samples))
    distinct = bunch_distinctness(spec, samples)
    separated = all(row["verdict"] == Verdict.NON_ISOMETRIC.value for row in distinct)

    _write_json({
        "endpoints": endpoints,
        "branch_agreement": branches,
        "geodesic": violation is None,
        "distinctness": distinct,
        "distinctness_passed": separated,
        "rows": rows,
    }, output)
    if csv_output:
        _write_csv(rows, ["s", "t", "upper", "lower", "bound"], csv_output)
    if violation is not None:
        raise violation
    if not (endpoints and branches):
        click.echo("Condiciones del haz no satisfechas", err=True)
        sys.exit(1)
    if not separated:
        pending = sum(row["verdict"] != Verdict.NON_ISOMETRIC.value for row in distinct)
        click.echo(f"Distinción del haz sin certificar en {pending} pares", err=True)
        sys.exit(1)


# =============================================================================
# REPRODUCE
# =============================================================================

@cli.command()
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default="results", show_default=True)
@click.option("--only", multiple=True, help="Ejecuta sólo los criterios indicados")
@click.option("--inject-fault", default=None, help="Corrompe el criterio indicado")
@click.option("--json", "as_json", is_flag=True, help="Imprime el resumen en JSON")
@handle_errors
def reproduce(out_dir, only, inject_fault, as_json):
    """Ejecuta la batería de aceptación"""
    summary = reproduce_all(Path(out_dir), only=list(only) or None, inject_fault=inject_fault)
    if as_json:
        click.echo(json.dumps(summary, sort_keys=True, indent=2, default=float))
    else:
        for criterion in summary["criteria"]:
            status = "PASS" if criterion["passed"] else "FAIL"
            click.echo(f"[{status}] {criterion['name']}")
    if not summary["passed"]:
        sys.exit(1)


if __name__ == "__main__":
    cli()
