"""A five-minute tour: the ancestor, its mutant spectrum and a short run.

    python3 demos/quickstart.py
"""

from collections import Counter

from pressura.analysis import analyze_genome, test_fitness
from pressura.environment import build_environment
from pressura.isa import MutationConfig, reference_ancestor
from pressura.population import PopulationConfig, dominant_genotype, run_update, seed_population

anc = reference_ancestor()
print("ancestor:", " ".join(anc.mnemonics()))

simple = build_environment("simple")
r = test_fitness(anc, simple)
print(f"alone on the test CPU: gestation {r.gestation} steps, merit {r.merit}, w = {r.w:.4f}")

report = analyze_genome(anc, simple, N=400, R=0.0075, name="ancestor")
print(f"one-point mutants: {report.spectrum.total}, neutrality {report.spectrum.nu:.3f}, "
      f"F = {report.stats.F:.4f}, F_nu = {report.stats.F_nu:.4f}")

# a medium environment rewards ten logic tasks; watch the population adapt
cfg = PopulationConfig(capacity=200, mutation=MutationConfig(0.0075),
                       environment=build_environment("medium"))
pop = seed_population(cfg, anc, seed=1)
for u in range(1, 2001):
    stats = run_update(pop)
    if u % 250 == 0:
        print(f"update {u:5d}: {stats.occupied} organisms, mean length {stats.mean_length:.1f}, "
              f"mean fitness {stats.mean_fitness:.3f}")

dom, n = dominant_genotype(pop)
best = test_fitness(dom, cfg.environment)
print(f"dominant genotype ({n} copies, length {len(dom)}): tasks {sorted(best.tasks) or 'none'}")
lengths = Counter(len(pop.genome_at(c)) for c in pop.occupied_cells())
print("length histogram:", dict(sorted(lengths.items())))
