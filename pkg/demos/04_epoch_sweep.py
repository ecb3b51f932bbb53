"""
Epoch sweep: accuracy against energy
====================================

More local epochs per round mean fewer rounds to a given accuracy but
more compute time per round. Sweep E over {1, 5, 20}, write one CSV per
setting (ready for the plotting package), and compare what each setting
paid to reach 85%.
"""

from pathlib import Path

from uavfedsim import emit, load_config, run_scenario

out_dir = Path(__file__).resolve().parent / "out"
out_dir.mkdir(exist_ok=True)

print("  E   rounds to 85%   energy to 85%   final accuracy")
for epochs in (1, 5, 20):
    config = load_config(None, [f"training.epochs={epochs}"])
    result = run_scenario(config)
    emit(result, "csv", out_dir / f"epochs={epochs}.csv")

    hit = next((r for r in result.records if r.test_accuracy >= 0.85), None)
    rounds = hit.round_index if hit else "-"
    energy = f"{hit.cumulative_total_j:9.1f} J" if hit else "        -"
    print(f" {epochs:2d}   {rounds!s:>13}   {energy}   "
          f"{result.records[-1].test_accuracy:14.1%}")

print(f"\nwrote {len(list(out_dir.glob('epochs=*.csv')))} CSVs to {out_dir}")
print("plot them (needs the flplots package from frontend/):")
print("  plot --kind accuracy "
      + " ".join(f"--in E{e}={out_dir}/epochs={e}.csv" for e in (1, 5, 20))
      + " --out accuracy.png")
