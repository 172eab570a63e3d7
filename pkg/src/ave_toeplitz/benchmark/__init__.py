from .runner import BenchmarkRunner, exit_code_for, run_experiment

__all__ = ["BenchmarkRunner", "exit_code_for", "run_experiment"]
