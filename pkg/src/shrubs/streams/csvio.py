"""Streaming CSV ingestion.

The file is read twice, one row at a time: a schema pass fixes the feature
layout (categorical columns are one-hot expanded) and the label mapping, then
iteration yields samples in file order. Nothing beyond the current row is
buffered.
"""
import csv
import math

import numpy as np

from ..core import Sample
from ..errors import DomainError, IngestionError
from .base import StreamSchema

LABEL_MAPS = ("first-seen", "integer")


def _rows(path):
    """Yield ``(line_number, row)`` for data rows; the header is row 0."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            for row in reader:
                yield reader.line_num, row
    except OSError as exc:
        raise IngestionError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except (UnicodeDecodeError, csv.Error) as exc:
        raise IngestionError(f"malformed file {path}: {exc}") from exc


def _parse_float(cell):
    try:
        v = float(cell)
    except ValueError:
        return None
    return v if math.isfinite(v) else None


class CsvStream:
    """Samples from a CSV file with a header row.

    Parameters
    ----------
    path : str or Path
    label : str
        Name of the label column.
    categorical : iterable of str, optional
        Columns to one-hot encode. When omitted, any column holding a cell
        that does not parse as a finite number is treated as categorical.
    label_map : {"first-seen", "integer"}
        ``"first-seen"`` numbers labels in order of first appearance;
        ``"integer"`` uses the label cells as class indices directly.
    n_classes : int, optional
        Declared class count; must cover every label in the file.
    """

    def __init__(self, path, label, categorical=None, label_map="first-seen", n_classes=None):
        if label_map not in LABEL_MAPS:
            raise DomainError(f"label_map must be one of {LABEL_MAPS}")
        self.path = path
        self.label = label
        self.label_map = label_map
        self._scan(categorical, n_classes)

    def _scan(self, categorical, n_classes):
        rows = _rows(self.path)
        try:
            _, header = next(rows)
        except StopIteration:
            raise IngestionError(f"{self.path} is empty; a header row is required", 1) from None
        header = [h.strip() for h in header]
        if self.label not in header:
            raise IngestionError(f"label column {self.label!r} not in header", 1)
        self.header = header
        self._label_col = header.index(self.label)
        columns = [i for i in range(len(header)) if i != self._label_col]
        if categorical is not None:
            unknown = set(categorical) - set(header)
            if unknown:
                raise IngestionError(f"unknown categorical columns {sorted(unknown)}", 1)
        explicit = None if categorical is None else {header.index(c) for c in categorical}

        numeric = {i: True for i in columns}
        levels = {i: {} for i in columns}
        label_index = {}
        max_label = -1
        n_rows = 0
        for line, row in rows:
            if len(row) != len(header):
                raise IngestionError(
                    f"row has {len(row)} cells, header has {len(header)}", line
                )
            for i, cell in enumerate(row):
                if cell.strip() == "":
                    raise IngestionError(f"missing value in column {header[i]!r}", line)
            for i in columns:
                cell = row[i].strip()
                if explicit is not None and i not in explicit:
                    if _parse_float(cell) is None:
                        raise IngestionError(
                            f"non-numeric value {cell!r} in numeric column {header[i]!r}", line
                        )
                    continue
                if explicit is None and numeric[i] and _parse_float(cell) is None:
                    numeric[i] = False
                # level tables for columns still possibly categorical
                if explicit is not None or not numeric[i]:
                    levels[i].setdefault(cell, len(levels[i]))
            label = row[self._label_col].strip()
            if self.label_map == "integer":
                try:
                    value = int(label)
                except ValueError:
                    raise IngestionError(f"label {label!r} is not an integer", line) from None
                if value < 0:
                    raise IngestionError(f"negative label {value}", line)
                max_label = max(max_label, value)
            else:
                label_index.setdefault(label, len(label_index))
            n_rows += 1

        cat_cols = [i for i in columns if (i in explicit if explicit is not None else not numeric[i])]
        if explicit is None and cat_cols:
            # levels seen before a column revealed itself as categorical were
            # skipped; collect the full first-seen level order
            levels = {i: {} for i in cat_cols}
            for _, row in _skip_header(_rows(self.path)):
                for i in cat_cols:
                    levels[i].setdefault(row[i].strip(), len(levels[i]))

        self._layout = []
        names = []
        offset = 0
        for i in columns:
            if i in cat_cols:
                lv = levels[i]
                self._layout.append((i, offset, lv))
                names.extend(f"{header[i]}={v}" for v in lv)
                offset += len(lv)
            else:
                self._layout.append((i, offset, None))
                names.append(header[i])
                offset += 1
        self.feature_names = names
        if self.label_map == "integer":
            self.label_names = [str(k) for k in range(max_label + 1)]
            self._label_index = None
            observed = max_label + 1
        else:
            self.label_names = list(label_index)
            self._label_index = label_index
            observed = len(label_index)
        C = observed if n_classes is None else n_classes
        if C < observed:
            raise IngestionError(f"declared {C} classes but the file holds {observed}")
        if offset < 1:
            raise IngestionError("no feature columns besides the label")
        self.n_rows = n_rows
        self.schema = StreamSchema(offset, max(C, 2), str(self.path))

    def _decode(self, line, row):
        x = np.zeros(self.schema.n_features)
        for i, offset, lv in self._layout:
            cell = row[i].strip()
            if lv is None:
                v = _parse_float(cell)
                if v is None:
                    raise IngestionError(f"non-numeric value {cell!r} in column {self.header[i]!r}", line)
                x[offset] = v
            else:
                try:
                    x[offset + lv[cell]] = 1.0
                except KeyError:
                    raise IngestionError(f"unseen level {cell!r} in {self.header[i]!r}", line) from None
        label = row[self._label_col].strip()
        y = int(label) if self._label_index is None else self._label_index[label]
        return Sample(x, y)

    def __iter__(self):
        for line, row in _skip_header(_rows(self.path)):
            if len(row) != len(self.header):
                raise IngestionError(f"row has {len(row)} cells, header has {len(self.header)}", line)
            yield self._decode(line, row)


def _skip_header(rows):
    first = True
    for item in rows:
        if first:
            first = False
            continue
        yield item


def read_csv(path, label, categorical=None, label_map="first-seen", n_classes=None):
    """Open ``path`` as a :class:`CsvStream`; see that class for options."""
    return CsvStream(path, label, categorical, label_map, n_classes)
