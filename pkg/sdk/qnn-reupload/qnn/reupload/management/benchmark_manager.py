# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

from qnn.reupload.management.benchmark_manager_callbacks import BenchmarkManagerCallbacks
from qnn.reupload.management.benchmark_task import BenchmarkTask
from qnn.reupload.management.exceptions import InvalidArgumentError
from qnn.reupload.management.experiment_runner import prepare_data
from qnn.reupload.management.logger_module import logger
from qnn.reupload.management.suites import BenchmarkSuite

import uuid
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence


class BenchmarkManager:
    """
    This class is responsible for running the (row, seed) tasks of a benchmark suite on a thread pool.

    :param callbacks: The callbacks to use for task execution.
    :type callbacks: BenchmarkManagerCallbacks
    :param max_workers: Maximum number of worker threads; None lets the executor decide.
    :type max_workers: Optional[int]
    """
    def __init__(
            self,
            callbacks: Optional[BenchmarkManagerCallbacks] = None,
            max_workers: Optional[int] = None
    ) -> None:
        if max_workers is not None and max_workers < 1:
            raise InvalidArgumentError(f"max_workers must be positive, got {max_workers}")
        self._callbacks = callbacks or BenchmarkManagerCallbacks()
        self._max_workers = max_workers

    def create_tasks(
            self,
            suite: BenchmarkSuite,
            seeds: Sequence[int],
            csv_path: Optional[str] = None,
            output_dir: str = 'results'
    ) -> List[BenchmarkTask]:
        """
        Creates one task per suite row and seed, in row-major order. All rows of a seed share the same data.

        :param suite: The benchmark suite.
        :type suite: BenchmarkSuite
        :param seeds: The seeds.
        :type seeds: Sequence[int]
        :param csv_path: The transaction CSV for fraud suites.
        :type csv_path: Optional[str]
        :param output_dir: The output folder recorded in each configuration.
        :type output_dir: str

        :return: The tasks.
        :rtype: List[BenchmarkTask]
        """
        seeds = list(dict.fromkeys(seeds))
        if not seeds:
            raise InvalidArgumentError("At least one seed is required")
        data_by_seed = {}
        for seed in seeds:
            config = suite.experiment_config(0, seed, csv_path, output_dir)
            config.check_paths()
            data_by_seed[seed] = prepare_data(config.dataset, seed)

        tasks = []
        for row_index in range(len(suite.rows)):
            for seed in seeds:
                config = suite.experiment_config(row_index, seed, csv_path, output_dir)
                tasks.append(BenchmarkTask(row_index, seed, config, data_by_seed[seed]))
        return tasks

    def run_tasks(self, tasks: List[BenchmarkTask]) -> str:
        """
        Executes tasks concurrently and waits for all of them. Failures are recorded on the task.

        :param tasks: The tasks.
        :type tasks: List[BenchmarkTask]

        :return: The ID of the run.
        :rtype: str
        """
        run_id = str(uuid.uuid4())
        logger.info(f"Benchmark run {run_id}: {len(tasks)} tasks")
        with ThreadPoolExecutor(max_workers=self._max_workers) as executor:
            futures = [executor.submit(self._execute_task, task, run_id) for task in tasks]
            for future in futures:
                future.result()
        failed = sum(1 for task in tasks if not task.succeeded)
        logger.info(f"Benchmark run {run_id} finished, {failed} of {len(tasks)} tasks failed")
        return run_id

    def run(
            self,
            suite: BenchmarkSuite,
            seeds: Sequence[int],
            csv_path: Optional[str] = None,
            output_dir: str = 'results'
    ) -> List[BenchmarkTask]:
        tasks = self.create_tasks(suite, seeds, csv_path, output_dir)
        self.run_tasks(tasks)
        return tasks

    def _execute_task(self, task: BenchmarkTask, run_id: str) -> None:
        try:
            self._callbacks.on_task_started(task, run_id)
            record = task.execute(callback=lambda: self._callbacks.on_task_execute(task, run_id))
            self._callbacks.on_task_completed(task, run_id, record)
        except Exception as e:
            task.error = str(e) or type(e).__name__
            logger.error(f"Task {task} failed: {task.error}")
            self._callbacks.on_task_failed(task, run_id, task.error)
