"""
Output Emitters
Table, CSV and JSON renderings of harness results. Rows are formatted to
strings before they reach pandas, so identical runs give identical bytes.
"""

from typing import Dict, List, Sequence

import pandas as pd

RECORD_COLUMNS = ["theorem", "n", "lo", "value", "hi", "verdict", "precision_bits"]
TREND_COLUMNS = ["n", "a_n", "band_lo", "band_hi", "gap_to_limit", "approaching"]
EPSILON_COLUMNS = ["r", "eps", "c", "j1_coefficient", "j234_coefficient", "total_coefficient", "objective",
                   "objective_coefficient"]


def emit_rows(rows: Sequence[Dict], columns: List[str], fmt: str) -> str:
    frame = pd.DataFrame(list(rows), columns=columns)
    if fmt == "csv":
        return frame.to_csv(index=False, lineterminator="\n")
    if fmt == "json":
        return frame.to_json(orient="records", indent=2) + "\n"
    if frame.empty:
        return "(no rows)\n"
    return frame.to_string(index=False) + "\n"


def emit_records(records, fmt: str) -> str:
    return emit_rows([record.as_row() for record in records], RECORD_COLUMNS, fmt)


def summarize(records) -> Dict[str, int]:
    """Verdict counts, PASS/FAIL/INDETERMINATE"""
    counts = {"PASS": 0, "FAIL": 0, "INDETERMINATE": 0}
    for record in records:
        counts[record.verdict.value] += 1
    return counts
