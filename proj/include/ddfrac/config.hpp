#ifndef DDFRAC_CONFIG_HPP
#define DDFRAC_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ddfrac/harness.hpp"

namespace ddfrac {

class ConfigError : public InvalidParameter {
public:
    using InvalidParameter::InvalidParameter;
};

/// Convergence-study request carried by the experiment configuration.
struct ConvergeSpec {
    std::string mode = "points";  // "points" | "noise"
    std::vector<int> counts{10, 20, 50, 100, 250, 500, 1000, 5000, 10000};
    std::vector<double> amplitudes{0.10, 0.05, 0.025, 0.005, 5e-4, 5e-5};
    int N = 5000;  // dataset size for the noise study
    int replications = 100;
    int threads = 0;
};

/// One experiment: specimen + machine + resistance model + dataset recipe +
/// solver + load program. Parsed from a single versioned JSON document.
struct ExperimentConfig {
    int schema = 1;

    SpecimenKind specimen_kind = SpecimenKind::StandardDcb;
    DimensionlessParams params;
    TaperGeometry taper;       // valid when specimen_kind == TaperedDcb
    bool from_physical = false;
    PhysicalParams physical{}; // retained for round-trip when from_physical

    MachineCoupling machine;

    ResistanceModel resistance = ResistanceModel::griffith();

    int dataset_N = 50;
    double dataset_lo = 0.0;
    double dataset_hi = crack_upper_bound;
    double noise_amplitude = 0.0;
    SamplingMode sampling = SamplingMode::Random;
    std::uint64_t seed = 0;

    RunSetup run;
    bool cpp_tol_auto = true;

    LoadProgram program = LoadProgram::monotone(400, 5e-5);

    ConvergeSpec converge;

    std::filesystem::path out_dir = "out";

    SpecimenModel specimen_model() const;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace ddfrac

#endif
