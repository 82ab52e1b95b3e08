# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

from qnn.reupload.management.experiment_config import ExperimentConfig
from qnn.reupload.management.experiment_runner import PreparedData, run_experiment
from qnn.reupload.management.results_record import ResultsRecord

import uuid
from typing import Callable, Optional


class BenchmarkTask:
    """
    One (suite row, seed) experiment of a benchmark run.

    :param row_index: Index of the suite row.
    :type row_index: int
    :param seed: The experiment seed.
    :type seed: int
    :param config: The experiment configuration.
    :type config: ExperimentConfig
    :param data: Data shared by every row of the same seed.
    :type data: PreparedData
    """
    def __init__(self, row_index: int, seed: int, config: ExperimentConfig, data: PreparedData) -> None:
        self.id = uuid.uuid4()
        self.row_index = row_index
        self.seed = seed
        self.config = config
        self.data = data
        self.record: Optional[ResultsRecord] = None
        self.error: Optional[str] = None

    @property
    def succeeded(self) -> bool:
        return self.record is not None and self.error is None

    def execute(self, callback: Optional[Callable[[], None]] = None) -> ResultsRecord:
        """
        Trains and scores the row's model.

        :param callback: Called after training finishes.
        :type callback: Optional[Callable]

        :return: The results record.
        :rtype: ResultsRecord
        """
        record, _, _ = run_experiment(self.config, self.data)
        self.record = record
        if callback:
            callback()
        return record

    def __repr__(self) -> str:
        return f"BenchmarkTask(row={self.row_index + 1}, seed={self.seed})"
