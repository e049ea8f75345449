#pragma once

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "dpoi/dpoi.hpp"

namespace dpoi::cli {

enum ExitCode : int {
  kOk = 0,
  kNotConfluent = 1,
  kUnknown = 2,
  kUsage = 64,    // bad arguments or unreadable / malformed input
  kInvalid = 65,  // well-formed input describing an invalid system
};

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

inline std::string safe_name(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out;
}

}  // namespace detail

// Runs the command line `args` (without the program name), writing results to
// `out` and diagnostics to `err`. Returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Critical pairs and local confluence for DPO rewriting of hypergraphs with interfaces"};
  app.require_subcommand(1);

  std::string file;
  std::string out_dir;
  std::size_t jobs = 1;

  auto* validate = app.add_subcommand("validate", "check that every rule is left-connected");
  validate->add_option("file", file, "system JSON")->required();

  bool all = false, essential = false, no_dedup = false, suppress_mirrors = false;
  std::string dedup = "symmetric", format = "json";
  auto* cps = app.add_subcommand("critical-pairs", "enumerate critical pairs");
  cps->add_option("file", file, "system JSON")->required();
  auto* all_flag = cps->add_flag("--all", all, "all node gluings (full enumeration)");
  cps->add_flag("--essential", essential, "hyperedge gluings only (essential enumeration, default)")->excludes(all_flag);
  auto* no_dedup_flag = cps->add_flag("--no-dedup", no_dedup, "keep isomorphic duplicates");
  cps->add_option("--dedup", dedup, "equivalence used for deduplication")
      ->check(CLI::IsMember({"strict", "symmetric"}))
      ->excludes(no_dedup_flag)
      ->capture_default_str();
  cps->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "dot"}))->capture_default_str();
  cps->add_option("--out", out_dir, "write one file per pair into this directory");
  cps->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  cps->add_flag("--suppress-mirrors", suppress_mirrors, "enumerate rule pairs (i, j) with i <= j only");

  JoinOptions join;
  auto* conf = app.add_subcommand("confluence", "check joinability of every critical pair");
  conf->add_option("file", file, "system JSON")->required();
  conf->add_option("--max-depth", join.max_depth, "rewrite steps per side")->capture_default_str();
  conf->add_option("--max-states", join.max_states, "states per side")->capture_default_str();
  conf->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* render = app.add_subcommand("render", "write DOT files for each rule and each critical pair");
  render->add_option("file", file, "system JSON")->required();
  render->add_option("--out", out_dir, "output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << e.what() << "\n";
    return kUsage;
  }

  RewriteSystem sys;
  try {
    sys = load_system(file);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "invalid system: " << e.what() << "\n";
    return kInvalid;
  }

  try {
    const auto violations = validate_system(sys);
    if (*validate) {
      for (const auto& v : violations)
        out << "rule " << v.rule << " (" << sys.rules[v.rule].name << "): " << to_string(v.violation) << "\n";
      if (violations.empty()) out << "ok: " << sys.rules.size() << " left-connected rules\n";
      return violations.empty() ? kOk : kInvalid;
    }
    if (!violations.empty()) {
      err << "invalid system: " << violations.size() << " rule violation(s); run 'validate' for details\n";
      return kInvalid;
    }

    if (*cps) {
      EnumerationOptions opts;
      opts.mode = all ? EnumerationMode::All : EnumerationMode::Essential;
      opts.suppress_mirrors = suppress_mirrors;
      auto pairs = collect_critical_pairs(sys, opts, jobs);
      if (!no_dedup) pairs = dedup_up_to_iso(std::move(pairs), dedup == "strict" ? DedupMode::Strict : DedupMode::Symmetric);
      if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        const std::string name = "pair_" + std::to_string(k);
        const std::string text =
            format == "json" ? to_json(sys, pairs[k]).dump() + "\n" : to_dot(sys, pairs[k], name);
        if (out_dir.empty())
          out << text;
        else
          detail::write_file(std::filesystem::path(out_dir) / (name + (format == "json" ? ".json" : ".dot")), text);
      }
      if (!out_dir.empty()) out << pairs.size() << " critical pairs written to " << out_dir << "\n";
      return kOk;
    }

    if (*conf) {
      ConfluenceOptions opts;
      opts.join = join;
      opts.jobs = jobs;
      const auto report = check_local_confluence(sys, opts);
      out << to_json(sys, report).dump(2) << "\n";
      switch (report.verdict) {
        case ConfluenceVerdict::LocallyConfluent: return kOk;
        case ConfluenceVerdict::Unknown: return kUnknown;
        case ConfluenceVerdict::NotLocallyConfluent: return kNotConfluent;
      }
    }

    if (*render) {
      std::filesystem::create_directories(out_dir);
      const std::filesystem::path dir(out_dir);
      for (std::size_t i = 0; i < sys.rules.size(); ++i)
        detail::write_file(dir / ("rule_" + std::to_string(i) + "_" + detail::safe_name(sys.rules[i].name) + ".dot"),
                           rule_to_dot(sys.rules[i]));
      EnumerationOptions opts;
      opts.mode = EnumerationMode::Essential;
      const auto pairs = dedup_up_to_iso(collect_critical_pairs(sys, opts), DedupMode::Symmetric);
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        const std::string name = "pair_" + std::to_string(k);
        detail::write_file(dir / (name + ".dot"), to_dot(sys, pairs[k], name));
      }
      out << sys.rules.size() << " rules and " << pairs.size() << " critical pairs rendered to " << out_dir << "\n";
      return kOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace dpoi::cli
