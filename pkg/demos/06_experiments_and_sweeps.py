"""A reduced-size version of the mode-comparison experiment and one sweep.

Uses 6 trials of 1 h per cell so it finishes in about a minute; the shipped
experiment defaults (20 x 4 h headline, 15 x 2 h sweeps) follow the same path.
"""

import warnings

from wvcsim import ExperimentPlan, Mode, run_headline, run_sweep, summarize
from wvcsim.experiments import format_summary

warnings.filterwarnings("ignore", message="spacing")

plan = ExperimentPlan.headline(master_seed=31, trials_per_point=6,
                               hours_per_trial=1.0)
records = run_headline(plan, workers=2)
stats = [s for s in summarize(records)
         if s.metric in ("collision_rate_per_entry_pct", "road_entries",
                         "frozen_on_road_time")]
print("mode comparison (6 trials x 1 h per mode):\n")
print(format_summary(stats))

plan = ExperimentPlan.sweep("kappa", master_seed=31, trials_per_point=6,
                            hours_per_trial=1.0, values=(0.3, 3.0),
                            modes=(Mode.CONTROL, Mode.AWARE))
records = run_sweep(plan, workers=2)
stats = [s for s in summarize(records)
         if s.metric == "collision_rate_per_entry_pct"
         and s.mode_b == "Aware"]
print("\nsensitivity sweep over the baseline detection rate (0.3 vs 3.0 /s):\n")
print(format_summary(stats))
print("\n(stars: * p<0.05, ** p<0.01, *** p<0.001)")
