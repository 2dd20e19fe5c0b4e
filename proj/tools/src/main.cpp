#include "omitlab/errors.hpp"
#include "omitlab_cli/config.hpp"
#include "omitlab_cli/figures.hpp"
#include "omitlab_cli/reproduce.hpp"
#include "omitlab_cli/run.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace {

using namespace omit::cli;

struct TaskArgs {
    std::string config;
    std::string out;
    std::string format;
};

int report_run(const RunResult& r) {
    for (const auto& line : r.lines) std::cout << line << '\n';
    std::cout << r.summary << '\n';
    return r.checks_passed ? kExitOk : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"omit-lab: optomechanically induced transparency in a two-cavity membrane system"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");

    const Task tasks[] = {Task::spectrum, Task::window,     Task::width,
                          Task::delay,    Task::absorption, Task::simulate};
    std::vector<std::pair<Task, CLI::App*>> commands;
    std::map<Task, TaskArgs> args;
    for (Task t : tasks) {
        auto* sub = app.add_subcommand(to_string(t), "Run the " + to_string(t) + " task");
        auto& a = args[t];
        sub->add_option("--config", a.config, "JSON config file")->required();
        sub->add_option("--out", a.out, "Output file");
        sub->add_option("--format", a.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        commands.emplace_back(t, sub);
    }

    std::string figure;
    std::string repro_config;
    std::string repro_out = ".";
    auto* repro = app.add_subcommand("reproduce", "Recompute a figure and check its quoted numbers");
    repro->add_option("figure", figure, "fig2 ... fig9");
    repro->add_option("--config", repro_config, "JSON config naming the figure");
    repro->add_option("--out", repro_out, "Output directory for plot CSVs");
    auto* list = app.add_subcommand("figures", "List built-in figure tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*list) {
            std::cout << "figure table version " << figure_table_version() << '\n';
            for (const auto& name : figure_names())
                std::cout << name << ": " << load_figure(name).title << '\n';
            return kExitOk;
        }
        if (*repro) {
            if (figure.empty() && repro_config.empty())
                throw ConfigError("figure", "give a figure name or --config");
            if (!repro_config.empty()) {
                RunConfig cfg = load_config(repro_config, Task::reproduce);
                if (!figure.empty()) cfg.figure = figure;
                if (repro->count("--out")) cfg.out_path = repro_out;
                return report_run(run(cfg, threads));
            }
            const auto report = reproduce(figure, repro_out, threads);
            print_report(std::cout, report);
            return report.passed() ? kExitOk : kExitCheckFailed;
        }
        for (const auto& [task, sub] : commands) {
            if (!*sub) continue;
            const TaskArgs& a = args[task];
            RunConfig cfg = load_config(a.config, task);
            if (!a.out.empty()) cfg.out_path = a.out;
            if (!a.format.empty()) cfg.format = a.format == "json" ? Format::json : Format::csv;
            return report_run(run(cfg, threads));
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const omit::Error& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kExitSolver;
    }
    return kExitConfig;
}
