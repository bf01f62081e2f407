"""Set validation targets from 20 seeded reruns, then estimate benchmark cost.

Run with ``python3 demos/target_setting.py``.
"""
from ttr_arbiter import datasets
from ttr_arbiter.analysis import estimate_costs
from ttr_arbiter.core import RulesetConfig
from ttr_arbiter.targets import RerunOutcome, validation_target

if __name__ == "__main__":
    published = datasets.published_medians()
    print(f"{'workload':<12}{'median':>12}{'published':>12}")
    for w, values in datasets.rerun_validation_values().items():
        reruns = [RerunOutcome(i, v, v) for i, v in enumerate(values)]
        print(f"{w:<12}{validation_target(reruns):>12.6g}{published[w]:>12}")

    budgets = datasets.workload_budgets()
    print("\nEstimated cost in hours")
    for label, est in [
        ("external, all workloads", estimate_costs(budgets)),
        ("self-tuning, all workloads", estimate_costs(budgets, RulesetConfig.self_tuning())),
        ("external, qualification set",
         estimate_costs(budgets, include_heldout=False, subset=datasets.qualification_workloads())),
    ]:
        tuning = "n/a" if est.tuning is None else f"{est.tuning:.2f}"
        print(f"  {label:<30} one point {est.one_hyperparameter:8.2f}  scoring {est.scoring:8.2f}  tuning {tuning}")
