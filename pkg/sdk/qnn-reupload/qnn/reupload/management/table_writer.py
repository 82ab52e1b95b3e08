# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

from qnn.reupload.management.benchmark_task import BenchmarkTask
from qnn.reupload.management.logger_module import logger
from qnn.reupload.management.suites import BenchmarkSuite

import csv
import os
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np


METRIC_COLUMNS = ('Train Acc.', 'Acc.', 'Precision', 'Recall')
CONFUSION_COLUMNS = ('tp', 'tn', 'fp', 'fn')
_MISSING = 'n/a'


def _format_value(value: Optional[float], digits: int = 3) -> str:
    return _MISSING if value is None else f"{value:.{digits}f}"


def format_table(headers: Sequence[str], rows: Sequence[Sequence[str]], title: Optional[str] = None) -> str:
    """
    Renders rows as left-aligned text columns separated by two spaces.

    :param headers: Column names.
    :type headers: Sequence[str]
    :param rows: Cell strings, one sequence per row.
    :type rows: Sequence[Sequence[str]]
    :param title: Optional first line.
    :type title: Optional[str]

    :return: The table text, ending with a newline.
    :rtype: str
    """
    widths = [len(h) for h in headers]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]

    def render(cells: Sequence[str]) -> str:
        return '  '.join(cell.ljust(w) for cell, w in zip(cells, widths)).rstrip()

    lines = [title] if title else []
    lines.append(render(headers))
    lines.append('  '.join('-' * w for w in widths))
    lines.extend(render(row) for row in rows)
    return '\n'.join(lines) + '\n'


def write_table(
        path: str,
        headers: Sequence[str],
        rows: Sequence[Sequence[str]],
        title: Optional[str] = None
) -> Tuple[str, str]:
    """
    Writes the aligned text table to path and a CSV twin next to it.

    :return: (text path, csv path).
    :rtype: Tuple[str, str]
    """
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    csv_path = os.path.splitext(path)[0] + '.csv'
    with open(path, 'w', encoding='utf-8', newline='\n') as file:
        file.write(format_table(headers, rows, title))
    with open(csv_path, 'w', encoding='utf-8', newline='') as file:
        writer = csv.writer(file, lineterminator='\n')
        writer.writerow(headers)
        writer.writerows(rows)
    logger.info(f"Wrote table {path} and {csv_path}")
    return path, csv_path


def _task_values(task: BenchmarkTask) -> Dict[str, Any]:
    train = task.record.train_metrics
    test = task.record.test_metrics
    values = {name: test[name] for name in CONFUSION_COLUMNS}
    values['Train Acc.'] = train.get('accuracy')
    values['Acc.'] = test.get('accuracy')
    values['Precision'] = test.get('precision')
    values['Recall'] = test.get('recall')
    return values


def suite_headers(suite: BenchmarkSuite) -> List[str]:
    headers = ['Layer Type', 'Initial Prep.', '#Layers', 'Depth', '#Params.', 'Seed']
    if suite.confusion_columns:
        headers.extend(CONFUSION_COLUMNS)
    headers.extend(METRIC_COLUMNS)
    headers.append('Status')
    return headers


def suite_table(suite: BenchmarkSuite, tasks: Sequence[BenchmarkTask]) -> Tuple[List[str], List[List[str]]]:
    """
    Builds the benchmark table: for every suite row, one line per seed followed by a 'mean' line over
    the successful seeds and a 'best' line for the seed with the highest test accuracy.

    :param suite: The suite.
    :type suite: BenchmarkSuite
    :param tasks: The executed tasks of the suite.
    :type tasks: Sequence[BenchmarkTask]

    :return: (headers, rows).
    :rtype: Tuple[List[str], List[List[str]]]
    """
    headers = suite_headers(suite)
    rows: List[List[str]] = []
    for row_index, row in enumerate(suite.rows):
        prefix = [row.layer_type, row.initial_prep, str(row.n_layers),
                  '-' if row.depth is None else str(row.depth), str(row.params)]
        row_tasks = [task for task in tasks if task.row_index == row_index]

        def line(seed_cell: str, values: Optional[Dict[str, Any]], status: str, count_digits: int = 0) -> List[str]:
            cells = prefix + [seed_cell]
            if suite.confusion_columns:
                cells.extend(_MISSING if values is None else _format_value(values[name], count_digits)
                             for name in CONFUSION_COLUMNS)
            cells.extend(_MISSING if values is None else _format_value(values[name]) for name in METRIC_COLUMNS)
            cells.append(status)
            return cells

        succeeded = []
        for task in row_tasks:
            if task.succeeded:
                values = _task_values(task)
                succeeded.append((task.seed, values))
                rows.append(line(str(task.seed), values, 'ok'))
            else:
                rows.append(line(str(task.seed), None, f"failed: {task.error}"))

        if not succeeded:
            rows.append(line('mean', None, 'all failed'))
            rows.append(line('best', None, 'all failed'))
            continue

        mean: Dict[str, Any] = {}
        for name in CONFUSION_COLUMNS + METRIC_COLUMNS:
            defined = [values[name] for _, values in succeeded if values[name] is not None]
            mean[name] = float(np.mean(defined)) if defined else None
        rows.append(line('mean', mean, f"{len(succeeded)}/{len(row_tasks)} ok", count_digits=1))

        scored = [(seed, values) for seed, values in succeeded if values['Acc.'] is not None]
        if scored:
            best_seed, best_values = max(scored, key=lambda item: item[1]['Acc.'])
            rows.append(line(f"best ({best_seed})", best_values, 'best'))
        else:
            rows.append(line('best', None, 'no test accuracy'))
    return headers, rows
