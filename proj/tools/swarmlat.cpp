// Command-line front end: run, plot, preset, list-presets.

#include <iostream>

#include <CLI11.hpp>

#include "swarmlat.hpp"

namespace {

std::vector<int> parse_steps(const std::string& text) {
    std::vector<int> steps;
    for (const std::string& s : swarmlat::detail::split(text, ','))
        steps.push_back(static_cast<int>(swarmlat::detail::parse_int(s, "--steps")));
    return steps;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"swarmlat: leader/follower lattice deformation"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir = ".";
    int threads = 0, stride = 0;
    auto* run = app.add_subcommand("run", "run a scenario file");
    run->add_option("scenario", scenario_path, "scenario file")->required();
    run->add_option("-o,--output", out_dir, "output directory");
    run->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    run->add_option("--record-stride", stride, "record every M-th step")->check(CLI::PositiveNumber);

    std::string csv_path, steps_text, field_text = "none", plot_dir = ".";
    auto* plot = app.add_subcommand("plot", "render recorded steps as SVG");
    plot->add_option("csv", csv_path, "trajectory.csv")->required();
    plot->add_option("--steps", steps_text, "comma separated steps")->required();
    plot->add_option("--field", field_text, "none, pe1 or pe2")->check(CLI::IsMember({"none", "pe1", "pe2"}));
    plot->add_option("-o,--output", plot_dir, "output directory");

    std::string preset_name;
    auto* preset = app.add_subcommand("preset", "print a preset scenario");
    preset->add_option("name", preset_name, "preset name")->required();

    auto* list = app.add_subcommand("list-presets", "list preset names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*run) {
            swarmlat::RunOverrides over;
            if (threads > 0) over.threads = threads;
            if (stride > 0) over.record_stride = stride;
            const auto r = swarmlat::run_command(scenario_path, out_dir, over);
            std::cout << "particles " << r.particles << ", recorded steps " << r.recorded_steps << ", fracture events "
                      << r.fracture_events << "\n";
        } else if (*plot) {
            std::optional<swarmlat::FieldKind> field;
            if (field_text == "pe1") field = swarmlat::FieldKind::PE1;
            if (field_text == "pe2") field = swarmlat::FieldKind::PE2;
            std::vector<int> steps;
            try {
                steps = parse_steps(steps_text);
            } catch (const swarmlat::ConfigError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 1;
            }
            for (const auto& p : swarmlat::plot_command(csv_path, steps, field, plot_dir)) std::cout << p.string() << "\n";
        } else if (*preset) {
            std::cout << swarmlat::preset_command(preset_name);
        } else if (*list) {
            for (const auto& n : swarmlat::preset_names()) std::cout << n << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
