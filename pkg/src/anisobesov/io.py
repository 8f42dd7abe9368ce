"""Text serialization of fields, layer stacks and rate reports.

A ``.field`` file is a JSON header line carrying the grid,
``{"d": int, "half_width": [...], "samples": [...]}``, followed by CSV rows
``index,re,im`` over the flattened (C-order) sample array. Floats are
written with 17 significant digits so a save/load round trip is exact.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from anisobesov.approx import RateReport
from anisobesov.exceptions import DomainError
from anisobesov.field import GridSpec, SampledField
from anisobesov.spectral import LayerStack

FIELD_COLUMNS = ("index", "re", "im")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def dumps_field(field: SampledField) -> str:
    buf = io.StringIO(newline="")
    buf.write(json.dumps(field.spec.to_dict()) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FIELD_COLUMNS)
    flat = field.values.ravel()
    for i, v in enumerate(flat):
        writer.writerow((i, _fmt(v.real), _fmt(v.imag)))
    return buf.getvalue()


def loads_field(text: str) -> SampledField:
    header, _, body = text.partition("\n")
    try:
        spec = GridSpec.from_dict(json.loads(header))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise DomainError(f"malformed field header: {exc}") from exc
    reader = csv.reader(io.StringIO(body))
    columns = next(reader, None)
    if tuple(columns or ()) != FIELD_COLUMNS:
        raise DomainError(f"expected columns {FIELD_COLUMNS}, got {columns}")
    size = int(np.prod(spec.shape))
    values = np.zeros(size, dtype=complex)
    seen = np.zeros(size, dtype=bool)
    for row in reader:
        if not row:
            continue
        i = int(row[0])
        if not 0 <= i < size:
            raise DomainError(f"sample index {i} outside 0..{size - 1}")
        values[i] = complex(float(row[1]), float(row[2]))
        seen[i] = True
    if not seen.all():
        raise DomainError(f"field file is missing {int((~seen).sum())} of {size} samples")
    return SampledField(spec, values.reshape(spec.shape))


def save_field(field: SampledField, path) -> Path:
    path = Path(path)
    path.write_text(dumps_field(field), encoding="utf-8", newline="")
    return path


def load_field(path) -> SampledField:
    return loads_field(Path(path).read_text(encoding="utf-8"))


def save_layer_stack(stack: LayerStack, directory) -> Path:
    """Write ``layer_000.field`` ... , ``residual.field`` and ``manifest.json``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for s, layer in enumerate(stack.layers):
        save_field(layer, directory / f"layer_{s:03d}.field")
    save_field(stack.residual, directory / "residual.field")
    manifest = stack.manifest()
    manifest["layers"] = [f"layer_{s:03d}.field" for s in range(len(stack.layers))]
    manifest["residual"] = "residual.field"
    (directory / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return directory


def write_rate_report(report: RateReport, csv_path) -> tuple[Path, Path]:
    """Write the ``n,error,log2_error`` table and its JSON sidecar."""
    csv_path = Path(csv_path)
    csv_path.write_text(report.to_csv(), encoding="utf-8", newline="")
    sidecar = csv_path.with_suffix(".json")
    sidecar.write_text(json.dumps(report.sidecar(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return csv_path, sidecar
