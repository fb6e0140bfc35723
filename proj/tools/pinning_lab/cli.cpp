#include "pinning_lab/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "pinning/error.hpp"
#include "pinning/random.hpp"
#include "pinning_lab/commands.hpp"

namespace pinning::cli {

namespace {

using Command = std::function<CommandResult(const ExperimentConfig&)>;

const std::map<std::string, Command>& commands() {
    static const std::map<std::string, Command> m = {
        {"validate-kernel", cmd_validate_kernel}, {"free-energy", cmd_free_energy}, {"critical", cmd_critical},
        {"exponent", cmd_exponent},               {"fkg", cmd_fkg},                 {"rare-region", cmd_rare_region},
    };
    return m;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string render(const std::string& command, const ExperimentConfig& cfg, const CommandResult& res,
                   bool canonical, double elapsed) {
    std::ostringstream os;
    if (cfg.format == OutputFormat::Json) {
        json doc = {{"tool", "pinning-lab"},
                    {"version", PINNING_VERSION},
                    {"seed_scheme", seed_scheme_version},
                    {"command", command},
                    {"config", cfg.echo},
                    {"result", res.result}};
        if (!canonical)
            doc["metadata"] = {{"timestamp", utc_timestamp()}, {"elapsed_seconds", elapsed}, {"threads", cfg.threads}};
        os << doc.dump(2) << '\n';
    } else {
        if (!res.table) throw ValidationError("format csv is not available for '" + command + "' (use json)");
        os << "# tool: pinning-lab " << PINNING_VERSION << "\n";
        os << "# command: " << command << "\n";
        os << "# seed_scheme: " << seed_scheme_version << "\n";
        for (const auto& [k, v] : cfg.echo) os << "# config: " << k << " = " << v << "\n";
        for (const auto& note : res.csv_notes) os << "# " << note << "\n";
        if (!canonical)
            os << "# metadata: timestamp = " << utc_timestamp() << ", elapsed_seconds = " << elapsed
               << ", threads = " << cfg.threads << "\n";
        res.table->write(os);
    }
    return os.str();
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"pinning-lab: disordered pinning model experiments"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::string output;
    std::string format;
    bool canonical = false;

    for (const auto& [name, _] : commands()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "key = value config file");
        sub->add_option("--set", overrides, "override a config key (key=value), repeatable");
        sub->add_option("--seed", seed, "master seed");
        sub->add_option("--threads", threads, "worker threads");
        sub->add_option("--output", output, "output path (default stdout)");
        sub->add_option("--format", format, "csv|json");
        sub->add_flag("--canonical-hash", canonical, "omit volatile metadata and print a digest of the output");
    }

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    if (!argv_rev.empty()) argv_rev.pop_back();  // program name
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return exit_validation;
    }

    std::string command;
    for (const auto* sub : app.get_subcommands()) command = sub->get_name();

    try {
        KeyValueConfig kv;
        if (!config_path.empty()) kv = KeyValueConfig::load(config_path);
        for (const auto& o : overrides) {
            const auto eq = o.find('=');
            if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + o + "'");
            kv.set(o.substr(0, eq), o.substr(eq + 1));
        }
        if (seed) kv.set("seed", std::to_string(*seed));
        if (threads) kv.set("threads", std::to_string(*threads));
        if (!output.empty()) kv.set("output", output);
        if (!format.empty()) kv.set("format", format);
        const auto cfg = resolve(kv);

        const auto t0 = std::chrono::steady_clock::now();
        const auto res = commands().at(command)(cfg);
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const std::string doc = render(command, cfg, res, canonical, elapsed);

        if (cfg.output.empty()) {
            out << doc;
        } else {
            std::ofstream f(cfg.output, std::ios::binary);
            if (!f) throw std::runtime_error("cannot write output file '" + cfg.output + "'");
            f << doc;
        }
        if (canonical) {
            std::ostringstream hex;
            hex << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(doc);
            err << "canonical-hash: " << hex.str() << "\n";
        }
        return res.exit_code;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const NotApplicable& e) {
        err << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::exception& e) {
        err << "runtime error: " << e.what() << "\n";
        return exit_runtime;
    }
}

}  // namespace pinning::cli
