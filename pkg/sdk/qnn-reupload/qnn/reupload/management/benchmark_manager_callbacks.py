# Licensed under the MIT license. See LICENSE.md file in the project root for full license information.

class BenchmarkManagerCallbacks:
    def on_task_started(self, task, run_id) -> None:
        """Called when a benchmark task starts.

        :param task: The task that started.
        :type task: BenchmarkTask
        :param run_id: The ID of the benchmark run.
        :type run_id: str

        :return: None
        :rtype: None
        """
        pass

    def on_task_completed(self, task, run_id, result) -> None:
        """Called when a benchmark task completes successfully.

        :param task: The task that completed.
        :type task: BenchmarkTask
        :param run_id: The ID of the benchmark run.
        :type run_id: str
        :param result: The results record of the task.
        :type result: ResultsRecord

        :return: None
        :rtype: None
        """
        pass

    def on_task_failed(self, task, run_id, error) -> None:
        """Called when a benchmark task fails. The run continues with the other tasks.

        :param task: The task that failed.
        :type task: BenchmarkTask
        :param run_id: The ID of the benchmark run.
        :type run_id: str
        :param error: The error message.
        :type error: str

        :return: None
        :rtype: None
        """
        pass

    def on_task_execute(self, task, run_id) -> None:
        """Called when a task has finished training, before it is reported.

        :param task: The task that is executing.
        :type task: BenchmarkTask
        :param run_id: The ID of the benchmark run.
        :type run_id: str

        :return: None
        :rtype: None
        """
        pass
