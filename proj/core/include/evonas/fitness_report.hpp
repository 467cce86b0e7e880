#pragma once

#include <string>

namespace evonas {

/// Result of one fitness evaluation. `accuracy` is the score the search
/// maximizes. `diagnostic` is non-empty when the candidate could not be
/// built/trained (such candidates score 0 instead of aborting the run).
/// `wall_time` is informational only and is never serialized into run
/// history, so reruns with the same seed stay byte-identical.
struct FitnessReport {
    double accuracy = 0.0;
    int epochs_run = 0;
    double wall_time = 0.0;
    double val_loss = 0.0;
    std::string diagnostic;

    bool failed() const { return !diagnostic.empty(); }
};

}  // namespace evonas
