#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "revelio/facets.hpp"
#include "revelio/net_parse.hpp"
#include "revelio/oracle.hpp"
#include "revelio/reveals.hpp"
#include "revelio/unfolder.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitResource = 2;
constexpr int kExitMismatch = 3;

struct RunReport {
  std::string input;
  std::size_t events = 0, conditions = 0;
  revelio::PassTimings timings;
  std::optional<std::uint32_t> k;
  std::optional<std::uint32_t> trusted_height;
  bool json = false;

  void print() const {
    if (json) {
      nlohmann::json j{{"input", input},
                       {"events", events},
                       {"conditions", conditions},
                       {"t_post_s", timings.post_s},
                       {"t_conf_s", timings.conf_s},
                       {"t_rev_s", timings.rev_s}};
      j["k"] = k ? nlohmann::json(*k) : nlohmann::json(nullptr);
      if (trusted_height) j["trusted_height"] = *trusted_height;
      std::cout << j.dump() << "\n";
      return;
    }
    std::cout << "input      " << input << "\n"
              << "events     " << events << "\n"
              << "conditions " << conditions << "\n"
              << "t_post_s   " << timings.post_s << "\n"
              << "t_conf_s   " << timings.conf_s << "\n"
              << "t_rev_s    " << timings.rev_s << "\n";
    if (k) std::cout << "k          " << *k << "\n";
    if (trusted_height) std::cout << "trusted    height <= " << *trusted_height << "\n";
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw revelio::NetError("cannot open input: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw revelio::NetError("cannot write output: " + path);
  out << data;
}

revelio::PetriNet load_net(const std::string& path) {
  auto text = slurp(path);
  switch (revelio::detect_format(text)) {
    case revelio::InputFormat::canonical:
      return revelio::parse_canonical(text);
    case revelio::InputFormat::llnet:
      return revelio::parse_llnet(text);
    case revelio::InputFormat::prefix_dump:
      throw revelio::NetError("expected a net, got a prefix dump: " + path);
  }
  throw revelio::NetError("unreachable");
}

revelio::CutoffPolicy parse_cutoff(const std::string& spec) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  auto value = [&]() -> std::uint32_t {
    if (colon == std::string::npos)
      throw CLI::ValidationError("--cutoff", "missing value in '" + spec + "'");
    return static_cast<std::uint32_t>(std::stoul(spec.substr(colon + 1)));
  };
  if (kind == "mcmillan") return revelio::CutoffPolicy::mcmillan();
  if (kind == "level") return revelio::CutoffPolicy::level(value());
  if (kind == "height") return revelio::CutoffPolicy::height_bound(value());
  if (kind == "events") return revelio::CutoffPolicy::event_bound(value());
  throw CLI::ValidationError("--cutoff", "unknown policy '" + spec + "'");
}

revelio::ResourceLimits make_limits(std::size_t max_events, double timeout_s) {
  revelio::ResourceLimits limits;
  limits.max_events = max_events;
  if (timeout_s > 0)
    limits.deadline = std::chrono::steady_clock::now() +
                      std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                          std::chrono::duration<double>(timeout_s));
  return limits;
}

void check_matrix_budget(std::size_t events) {
  const char* cap = std::getenv("REVELIO_MAX_MEM");
  if (!cap) return;
  std::size_t limit = std::strtoull(cap, nullptr, 10);
  std::size_t need = 3 * events * ((events + 63) / 64) * 8;
  if (limit && need > limit)
    throw revelio::ResourceError("bit matrices need " + std::to_string(need) +
                                     " bytes, REVELIO_MAX_MEM=" + std::to_string(limit),
                                 false);
}

revelio::EventSelector parse_selector(const std::string& text,
                                      const std::string& via) {
  if (!via.empty()) {
    std::vector<std::string> seq;
    std::stringstream ss(via);
    std::string item;
    while (std::getline(ss, item, ',')) seq.push_back(item);
    return revelio::EventSelector::by_firing(std::move(seq));
  }
  if (!text.empty() && text.find_first_not_of("0123456789") == std::string::npos)
    return revelio::EventSelector::by_id(
        static_cast<std::uint32_t>(std::stoul(text)));
  std::string name = text;
  if (name.size() > 1 && name[0] == 'e' &&
      name.find_first_not_of("0123456789", 1) == std::string::npos)
    return revelio::EventSelector::by_id(
        static_cast<std::uint32_t>(std::stoul(name.substr(1))));
  return revelio::EventSelector::by_name(name);
}

int cmd_verify(std::uint32_t seeds, std::uint32_t max_events, bool rev_variant) {
  std::uint32_t ok = 0;
  std::size_t divergences = 0;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    revelio::RandomNetParams params;
    params.events = max_events ? 1 + static_cast<std::uint32_t>(seed % max_events) : 0;
    auto o = revelio::random_occurrence_net(seed, params);
    revelio::validate(o);
    auto m = revelio::reveals_all(o);
    auto mc = revelio::enumerate_maximal(o);
    for (std::uint32_t x = 0; x < o.events.size(); ++x)
      for (std::uint32_t y = 0; y < o.events.size(); ++y)
        if (m.rev[x].test(y) != revelio::oracle_reveals(mc, x, y)) {
          std::cerr << "mismatch: seed=" << seed << " x=" << x << " y=" << y
                    << " algorithm=" << m.rev[x].test(y) << "\n";
          return kExitMismatch;
        }
    if (rev_variant) {
      revelio::RevealsOptions listing;
      listing.rev_superset_variant = true;
      auto v = revelio::reveals_all(o, std::nullopt, listing);
      for (std::uint32_t x = 0; x < o.events.size(); ++x)
        for (std::uint32_t y = 0; y < o.events.size(); ++y)
          if (v.rev[x].test(y) != m.rev[x].test(y)) ++divergences;
    }
    ++ok;
  }
  std::cout << ok << "/" << seeds << " ok";
  if (rev_variant) std::cout << " divergences=" << divergences;
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"occurrence-net unfolding and reveals analysis"};
  app.require_subcommand(1);

  std::string input, out_path, dot_path, csv_path, bin_path, quotient_path;
  std::string cutoff_spec = "level:1", via_x, via_y, sel_x, sel_y;
  std::size_t max_events = 1'000'000;
  double timeout_s = 0;
  unsigned threads = 1;
  bool json = false, exact_ui = false, facets_flag = false, rev_variant = false;
  std::optional<std::uint32_t> k_override;
  std::uint32_t verify_seeds = 100, verify_max_events = 12;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_flag("--json", json, "machine-readable report");
    cmd->add_option("--max-events", max_events, "unfolding event limit");
    cmd->add_option("--timeout", timeout_s, "wall-clock limit in seconds");
  };

  auto* unfold = app.add_subcommand("unfold", "unfold a net into a prefix");
  unfold->add_option("input", input)->required();
  unfold->add_option("--cutoff", cutoff_spec, "level:N | mcmillan | height:N | events:N");
  unfold->add_flag("--exact-ui", exact_ui, "trim to the cone union of minimal cutoffs");
  unfold->add_option("--out", out_path, "prefix dump path");
  unfold->add_option("--dot", dot_path, "DOT export path");
  add_common(unfold);

  auto* bound = app.add_subcommand("bound", "compute the witness depth bound K");
  bound->add_option("input", input)->required();
  add_common(bound);

  auto* reveals = app.add_subcommand("reveals", "run the three passes");
  reveals->add_option("input", input)->required();
  reveals->add_option("--cutoff", cutoff_spec, "unfolding policy for net inputs");
  reveals->add_option("--k", k_override, "depth bound for trusted_height");
  reveals->add_option("--csv", csv_path, "CSV matrix path");
  reveals->add_option("--bin", bin_path, "binary matrix path");
  reveals->add_flag("--facets", facets_flag, "print the facet listing");
  reveals->add_option("--quotient", quotient_path, "quotient DOT path");
  reveals->add_option("--threads", threads, "parallelism for the rev pass");
  reveals->add_flag("--rev-variant", rev_variant, "use the rev-superset test");
  add_common(reveals);

  auto* check = app.add_subcommand("check-pair", "decide whether x reveals y");
  check->add_option("input", input)->required();
  check->add_option("x", sel_x, "event id or transition name");
  check->add_option("y", sel_y, "event id or transition name");
  check->add_option("--via-x", via_x, "firing sequence selecting x (comma-separated)");
  check->add_option("--via-y", via_y, "firing sequence selecting y (comma-separated)");
  add_common(check);

  auto* verify = app.add_subcommand("verify", "differential run against the oracle");
  verify->add_option("--seeds", verify_seeds, "number of random nets");
  verify->add_option("--max-events", verify_max_events, "events per random net");
  verify->add_flag("--rev-variant", rev_variant, "use the rev-superset test");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    auto limits = make_limits(max_events, timeout_s);

    if (unfold->parsed()) {
      auto net = load_net(input);
      revelio::validate(net);
      auto prefix = revelio::unfold(net, parse_cutoff(cutoff_spec), limits);
      if (exact_ui && prefix.criterion.kind == revelio::CutoffPolicy::Kind::level)
        prefix = revelio::exact_ui(prefix, prefix.criterion.value);
      if (!out_path.empty()) spill(out_path, revelio::dump_prefix(prefix));
      if (!dot_path.empty())
        spill(dot_path, revelio::to_dot(prefix.occ, &prefix.cutoff_events));
      RunReport report{input, prefix.occ.events.size(), prefix.occ.conditions.size(),
                       {}, std::nullopt, std::nullopt, json};
      report.print();
      return 0;
    }

    if (bound->parsed()) {
      auto net = load_net(input);
      revelio::validate(net);
      auto prefix = revelio::unfold(net, revelio::CutoffPolicy::level(2), limits);
      auto u2 = revelio::exact_ui(prefix, 2);
      std::uint32_t k = revelio::prefix_height(u2.occ);
      std::cout << "K=" << k << "\n";
      RunReport report{input, u2.occ.events.size(), u2.occ.conditions.size(), {},
                       k, std::nullopt, json};
      report.print();
      return 0;
    }

    if (reveals->parsed()) {
      auto text = slurp(input);
      revelio::OccurrenceNet occ;
      std::optional<std::uint32_t> k = k_override;
      if (revelio::detect_format(text) == revelio::InputFormat::prefix_dump) {
        occ = revelio::parse_prefix(text).occ;
      } else {
        auto net = load_net(input);
        revelio::validate(net);
        auto prefix = revelio::unfold(net, parse_cutoff(cutoff_spec), limits);
        occ = std::move(prefix.occ);
        if (!k) k = revelio::bound_k(net, limits);
      }
      check_matrix_budget(occ.events.size());
      revelio::RevealsOptions opts;
      opts.threads = threads;
      opts.rev_superset_variant = rev_variant;
      revelio::PassTimings timings;
      auto m = revelio::reveals_all(occ, k, opts, &timings);
      if (!csv_path.empty()) spill(csv_path, revelio::matrix_to_csv(m));
      if (!bin_path.empty()) {
        auto bytes = revelio::matrix_to_binary(m);
        spill(bin_path, std::string(bytes.begin(), bytes.end()));
      }
      if (facets_flag || !quotient_path.empty()) {
        auto partition = revelio::compute_facets(m);
        if (facets_flag) std::cout << revelio::facet_listing(occ, partition);
        if (!quotient_path.empty())
          spill(quotient_path,
                revelio::quotient_to_dot(revelio::quotient(occ, partition)));
      }
      RunReport report{input, occ.events.size(), occ.conditions.size(), timings, k,
                       m.trusted_height, json};
      report.print();
      return 0;
    }

    if (check->parsed()) {
      auto net = load_net(input);
      revelio::validate(net);
      if (sel_x.empty() && via_x.empty())
        throw revelio::NetError("missing selector for x");
      if (sel_y.empty() && via_y.empty())
        throw revelio::NetError("missing selector for y");
      auto verdict = revelio::check_pair(net, parse_selector(sel_x, via_x),
                                         parse_selector(sel_y, via_y), limits);
      if (verdict.reveals)
        std::cout << "reveals";
      else
        std::cout << "not-reveals witness=" << *verdict.report.witness;
      std::cout << " explored=" << verdict.report.explored << "\n";
      return 0;
    }

    if (verify->parsed()) return cmd_verify(verify_seeds, verify_max_events, rev_variant);
  } catch (const revelio::ResourceError& e) {
    if (e.timeout) {
      std::cout << "t/o\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return kExitResource;
  } catch (const revelio::ParseError& e) {
    std::cerr << "error: " << input << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const revelio::NetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
