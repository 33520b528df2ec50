"""CSV readers and writers for S11 maps, transmission spectra and efficiency sweeps.

Every file starts with one or more ``#`` lines; the last one before the
first data row names the columns, and the names fix the units. Values are
comma separated with ``.`` decimals.
"""

import csv
import io as _io
from pathlib import Path

import numpy as np

from .absorption import TransmissionSpectrum, detunings_from_wavelength, ZERO_FIELD_WAVELENGTH_NM
from .cavity import S11Map

S11_COMPLEX_HEADER = ("field_T", "freq_Hz", "re_s11", "im_s11")
S11_ABS_HEADER = ("field_T", "freq_Hz", "abs_s11")
TRANSMISSION_HEADERS = (("detuning_Hz", "transmission"), ("wavelength_nm", "transmission"))
SWEEP_HEADER = ("axis_value", "eta_eo_db", "eta_q_db")


class CSVParseError(ValueError):
    def __init__(self, message, line=None, source=None):
        where = f"{source or '<input>'}" + (f", line {line}" if line is not None else "")
        super().__init__(f"{where}: {message}")
        self.line = line


def _read_lines(source):
    if isinstance(source, (str, Path)):
        with open(source, newline="") as fh:
            return fh.read().splitlines(), str(source)
    return source.read().splitlines(), getattr(source, "name", None)


def read_table(source, allowed_headers):
    """Parse a ``#``-headed CSV table.

    Returns (header tuple, float array of shape (rows, cols)). Raises
    CSVParseError naming the offending line.
    """
    lines, name = _read_lines(source)
    header, header_line, rows = None, None, []
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text:
            continue
        if text.startswith("#"):
            if rows:
                raise CSVParseError("header line after data rows", lineno, name)
            header = tuple(col.strip() for col in text.lstrip("#").split(","))
            header_line = lineno
            continue
        if header is None:
            raise CSVParseError("data before any '#' header line", lineno, name)
        fields = next(csv.reader([text]))
        if len(fields) != len(header):
            raise CSVParseError(f"expected {len(header)} columns, found {len(fields)}", lineno, name)
        try:
            rows.append([float(f) for f in fields])
        except ValueError:
            raise CSVParseError(f"non-numeric value in {text!r}", lineno, name) from None
        if not all(np.isfinite(rows[-1])):
            raise CSVParseError("non-finite value", lineno, name)
    if header is None:
        raise CSVParseError("missing '#' header line", None, name)
    if header not in allowed_headers:
        expected = " or ".join(", ".join(h) for h in allowed_headers)
        raise CSVParseError(f"unexpected columns {', '.join(header)}; expected {expected}", header_line, name)
    if not rows:
        raise CSVParseError("no data rows", None, name)
    return header, np.array(rows, dtype=float)


def _fmt(x):
    return repr(float(x))


def _write(dest, header, rows, comments=()):
    buf = _io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    buf.write("# " + ", ".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    text = buf.getvalue()
    if dest is None:
        return text
    if isinstance(dest, (str, Path)):
        with open(dest, "w", newline="") as fh:
            fh.write(text)
    else:
        dest.write(text)
    return text


def write_s11_csv(dest, s11map: S11Map, magnitude_only=False, comments=()):
    """Long format, one record per (field, frequency) point, field outermost."""
    F, B = np.meshgrid(s11map.frequencies, s11map.fields, indexing="ij")
    vals = s11map.values
    order = np.lexsort((F.ravel(), B.ravel()))
    b, f, v = B.ravel()[order], F.ravel()[order], vals.ravel()[order]
    if magnitude_only:
        return _write(dest, S11_ABS_HEADER, zip(b, f, np.abs(v)), comments)
    v = v.astype(complex)
    return _write(dest, S11_COMPLEX_HEADER, zip(b, f, v.real, v.imag), comments)


def read_s11_csv(source):
    """Read a long-format S11 file back into a complete rectangular S11Map."""
    header, data = read_table(source, (S11_COMPLEX_HEADER, S11_ABS_HEADER))
    fields = np.unique(data[:, 0])
    freqs = np.unique(data[:, 1])
    if fields.size * freqs.size != data.shape[0]:
        raise CSVParseError(f"{data.shape[0]} records do not form a complete "
                            f"{freqs.size} x {fields.size} grid", None, getattr(source, "name", str(source)))
    values = (data[:, 2] + 1j * data[:, 3]) if header == S11_COMPLEX_HEADER else data[:, 2]
    grid = np.full((freqs.size, fields.size), np.nan, dtype=values.dtype)
    grid[np.searchsorted(freqs, data[:, 1]), np.searchsorted(fields, data[:, 0])] = values
    if np.any(np.isnan(grid)):
        raise CSVParseError("duplicate grid points", None, getattr(source, "name", str(source)))
    return S11Map(freqs, fields, grid)


def write_transmission_csv(dest, spectrum: TransmissionSpectrum, comments=()):
    return _write(dest, TRANSMISSION_HEADERS[0], zip(spectrum.detunings, spectrum.transmission), comments)


def read_transmission_csv(source, center_wavelength_nm=ZERO_FIELD_WAVELENGTH_NM):
    """Read a spectrum; wavelength columns are converted to detuning from the line center."""
    header, data = read_table(source, TRANSMISSION_HEADERS)
    x = data[:, 0]
    if header[0] == "wavelength_nm":
        x = detunings_from_wavelength(x, center_wavelength_nm)
    order = np.argsort(x, kind="stable")
    return TransmissionSpectrum(x[order], data[order, 1])


def write_sweep_csv(dest, axis_values, eta_eo_db, eta_q_db, comments=()):
    return _write(dest, SWEEP_HEADER, zip(axis_values, eta_eo_db, eta_q_db), comments)


def read_sweep_csv(source):
    """Return (axis_value, eta_eo_db, eta_q_db) arrays."""
    _, data = read_table(source, (SWEEP_HEADER,))
    return data[:, 0], data[:, 1], data[:, 2]
