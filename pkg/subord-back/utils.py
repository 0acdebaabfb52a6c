import csv
import io
import json
import logging
import math
import os

import numpy as np

from analytic import AnalyticFn

logger = logging.getLogger(__name__)

REPORT_SCHEMA = 1


def _encode(value):
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return '"nan"'
        if math.isinf(value):
            return '"inf"' if value > 0 else '"-inf"'
        return format(value, ".17g")
    if isinstance(value, (complex, np.complexfloating)):
        return f"[{_encode(value.real)}, {_encode(value.imag)}]"
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(str(key))}: {_encode(item)}" for key, item in value.items()) + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_encode(item) for item in value) + "]"
    raise TypeError(f"cannot serialise {type(value).__name__} in a report")


class Utils:

    def __init__(self):
        self.SUBORD_THREADS = os.getenv("SUBORD_THREADS")
        self.SUBORD_LOG_LEVEL = os.getenv("SUBORD_LOG_LEVEL", "INFO")

    @property
    def threads(self):
        if not self.SUBORD_THREADS:
            return -1
        try:
            threads = int(self.SUBORD_THREADS)
        except ValueError:
            threads = 0
        if threads < 1:
            logger.warning(f"Ignoring SUBORD_THREADS={self.SUBORD_THREADS!r}; running single-threaded")
            return 1
        return threads

    @property
    def log_level(self):
        level = logging.getLevelName(self.SUBORD_LOG_LEVEL.upper())
        return level if isinstance(level, int) else logging.INFO

    def format_report(self, report):
        """Fixed field order, 17 significant digits, schema tag first."""
        return _encode({"schema": REPORT_SCHEMA, **report}) + "\n"

    def write_report(self, report, path):
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(self.format_report(report))
        logger.info(f"Report written to {path}")

    def format_csv(self, header, rows):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format(value, ".17g") if isinstance(value, float) else value for value in row])
        return buffer.getvalue()

    def load_json(self, path):
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)

    def load_series(self, path, leading_order=None):
        """Coefficient file: a list of [re, im] pairs, or an object with a "coefficients" key."""
        data = self.load_json(path)
        if isinstance(data, dict):
            data = data.get("coefficients")
        if not isinstance(data, list) or not data:
            raise ValueError(f"{path} does not hold a coefficient list")
        pairs = [item if isinstance(item, (list, tuple)) else (item, 0.0) for item in data]
        return AnalyticFn.from_json(pairs, leading_order)
