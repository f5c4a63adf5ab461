"""Module for parsing complex scalars and rendering CSV/JSON artifacts."""
import csv
import io
import json
import logging
import re
from typing import Any, Dict, Iterable, List, Sequence, Tuple

from .constants import FILE_ICON
from .errors import InputError

_BARE_IMAGINARY = re.compile(r'(^|[+-])i$')


def parse_complex(text: str) -> complex:
    """Parse 'a+bi' style scalars: '0.2+0.1i', '1.0i', '-i', '3'."""
    cleaned = str(text).strip().replace(' ', '')
    if not cleaned:
        raise InputError("empty complex scalar")
    cleaned = _BARE_IMAGINARY.sub(lambda m: f"{m.group(1)}1i", cleaned)
    if cleaned.endswith('i'):
        cleaned = cleaned[:-1] + 'j'
    try:
        return complex(cleaned)
    except ValueError as e:
        raise InputError(f"cannot parse {text!r} as a complex scalar (expected a+bi)") from e


def complex_to_json(z: complex) -> Dict[str, float]:
    z = complex(z)
    return {'re': z.real, 'im': z.imag}


def complex_from_json(value: Any) -> complex:
    """Accept {'re': .., 'im': ..}, a plain number or an 'a+bi' string."""
    if isinstance(value, dict):
        if set(value) - {'re', 'im'}:
            raise InputError(f"complex object has unexpected keys: {sorted(value)}")
        return complex(float(value.get('re', 0.0)), float(value.get('im', 0.0)))
    if isinstance(value, bool):
        raise InputError(f"expected a complex scalar, got {value!r}")
    if isinstance(value, (int, float, complex)):
        return complex(value)
    if isinstance(value, str):
        return parse_complex(value)
    raise InputError(f"expected a complex scalar, got {value!r}")


def format_float(x: float) -> str:
    """Shortest round-tripping representation."""
    return repr(float(x))


def trajectory_header(labels: Sequence[str], order: int) -> List[str]:
    header = ['y', 'eta', 'kappa']
    header += [f"{part}_u_{label}" for label in labels for part in ('re', 'im')]
    header += [f"{part}_ubar_{label}" for label in labels for part in ('re', 'im')]
    header += [f"{part}_c_{k}" for k in range(1, order + 1) for part in ('re', 'im')]
    return header


def trajectory_rows(trajectory) -> List[List[str]]:
    """One row per dense-output state of a Trajectory."""
    rows = []
    for state in trajectory.states:
        row = [state.y, state.eta, trajectory.kappa(state.y)]
        for _, u in state.u_points:
            row += [u.real, u.imag]
        for _, u in state.ubar_points:
            row += [u.real, u.imag]
        for c in state.series.coeffs:
            row += [c.real, c.imag]
        rows.append([format_float(v) for v in row])
    return rows


def render_csv(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def write_text(path: str, content: str, description: str) -> None:
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(content)
    logging.info(f"{FILE_ICON} {description} written to {path}")


def write_trajectory_csv(path: str, trajectory) -> None:
    first = trajectory.final
    header = trajectory_header([label for label, _ in first.u_points], first.series.order)
    write_text(path, render_csv(header, trajectory_rows(trajectory)), "Trajectory")


def write_json(path: str, data: Dict[str, Any], description: str) -> None:
    write_text(path, json.dumps(data, indent=2) + '\n', description)


def grid_header(K: int, residual_names: Sequence[str]) -> List[str]:
    header = ['node']
    header += [f"{part}_t{k}" for k in range(K + 1) for part in ('re', 'im')]
    header += [f"{part}_tbar{k}" for k in range(K + 1) for part in ('re', 'im')]
    header += ['y', 'residual', 'imag_residual', 'iterations']
    return header + list(residual_names)


def grid_rows(nodes) -> List[List[str]]:
    """One row per hodograph grid node."""
    rows = []
    for index, node in enumerate(nodes):
        row = [str(index)]
        values = list(node.times.holomorphic()) + list(node.times.antiholomorphic())
        for z in values:
            row += [format_float(z.real), format_float(z.imag)]
        solution = node.solution
        row += [format_float(solution.y), format_float(solution.residual),
                format_float(solution.imag_residual), str(solution.iterations)]
        row += [format_float(v) for v in node.residuals.values()]
        rows.append(row)
    return rows


def write_grid_csv(path: str, nodes) -> None:
    first = nodes[0]
    header = grid_header(first.times.K, list(first.residuals))
    write_text(path, render_csv(header, grid_rows(nodes)), "Hodograph grid")


def format_scan(scan: Sequence[Tuple[float, float]]) -> str:
    """Sign-scan table printed when a root is not bracketed."""
    lines = [f"{'y':>22}  {'Re(residual)':>22}"]
    lines += [f"{y:>22.15g}  {value:>22.15g}" for y, value in scan]
    return "\n".join(lines)
