"""Reproduce the distribution-shift comparison at the frozen defaults."""

from cvp import ShiftExperimentConfig, report_csv, run_experiment, shift_world_graph

config = ShiftExperimentConfig()
print("config: seed", config.seed,
      "| n", config.n_train, "/", config.n_test,
      "| flip", config.flip_prob,
      "| alpha", config.spurious_strength,
      "| sigma_s", config.spurious_noise_sd)

report = run_experiment(config, shift_world_graph())

print("\n  model            train%   test%")
print("  " + "-" * 33)
for m in report.models:
    print(f"  {m.name:<15} {m.train_accuracy*100:7.1f} {m.test_accuracy*100:7.1f}")

assoc = report.model("Associative")
anchored = report.model("CausalAnchored")
print(f"""
The associative model leans on x_s (weight {assoc.weights.weights[1]:+.2f}); when the
spurious correlation flips sign in the test environment it collapses by
{(assoc.train_accuracy - assoc.test_accuracy)*100:.1f} points. The anchored model never saw x_s (weight
{anchored.weights.weights[1]:+.2f}) and moves by {abs(anchored.train_accuracy - anchored.test_accuracy)*100:.1f} points.
""")

print("summary CSV:")
print(report_csv(report))
print("generator digest:", report.generator_digest[:16], "(reproducible)")
