// Minimal end-to-end use of the library: evolve a small two-objective front
// for the tax society, then let 200 random voters elect one norm set.

#include <iostream>

#include "normopt/normopt.hpp"

int main() {
    using namespace normopt;

    SimulationConfig simulation; // 200 citizens, 5 groups, 10-step paths
    TaxProblem problem(simulation, two_objective_set(), /*eval_samples=*/1,
                       /*report_samples=*/200, /*run_seed=*/7);

    MoeaConfig moea;
    moea.algorithm = Algorithm::nsga2;
    moea.population = 40;
    moea.generations = 60;
    moea.seed = 7;

    const Front front = evolve(problem, moea);
    std::cout << "front size: " << front.size() << "\n";
    for (const auto& s : front.solutions) {
        std::cout << "  Equality " << s.objectives.scores[0] << "  Fairness "
                  << s.objectives.scores[1] << "\n";
    }

    const auto voters = make_voters(200, /*seed=*/11);
    const ElectionResult elected = main_reasoner(voters, front.solutions);
    const NormVector norms = NormVector::from_genes(elected.winner.genes);

    std::cout << "\nelected solution " << elected.winner_index << " with "
              << elected.tally[elected.winner_index] << "/200 votes\n";
    std::cout << "collect[1] " << norms.collect[0] << ", catch " << norms.catch_rate << ", fine "
              << norms.fine_rate << "\n";
    return 0;
}
