// Command-line front end: build and query compressed self-indexes, generate
// repetitive corpora, inspect index files, and run a built-in self-test.
//
// Exit codes: 0 success, 1 query or input error (missing file, bad pattern,
// malformed index), 2 usage error (unknown flags, missing arguments).

#include <atomic>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "gsi/corpus.hpp"
#include "gsi/grammar.hpp"
#include "gsi/index.hpp"
#include "gsi/serialize.hpp"

namespace {

gsi::Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    gsi::fail(gsi::errc::invalid_input, "cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad())
    gsi::fail(gsi::errc::invalid_input, "cannot read file: " + path);
  return std::move(buf).str();
}

void write_file(const std::string& path, gsi::ByteView data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    gsi::fail(gsi::errc::invalid_input, "cannot create file: " + path);
  out.write(data.data(), std::streamsize(data.size()));
  out.flush();
  if (!out)
    gsi::fail(gsi::errc::invalid_input, "cannot write file: " + path);
}

gsi::SelfIndex load_index_file(const std::string& path) {
  return gsi::load_index(read_file(path));
}

std::string json_of(const std::vector<gsi::Occurrence>& occ) {
  std::string s = "[";
  for (size_t i = 0; i < occ.size(); ++i) {
    if (i) s += ",";
    s += "{\"pos\":" + std::to_string(occ[i].pos) + ",\"kind\":\"";
    s += occ[i].kind == gsi::OccKind::primary ? "primary" : "secondary";
    s += "\"}";
  }
  return s + "]";
}

// ---- build ----

struct BuildArgs {
  std::string input, output, slp_file;
  std::string mode = "fp";
  uint32_t c = 4;
  uint64_t seed = 1;
};

void run_build(const BuildArgs& a) {
  const gsi::Bytes text = read_file(a.input);
  gsi::BuildOptions opt;
  opt.mode = a.mode == "verify" ? gsi::IndexMode::verify
                                : gsi::IndexMode::fingerprint;
  opt.c = a.c;
  opt.seed = a.seed;
  gsi::Slp imported;
  if (!a.slp_file.empty()) {
    imported = gsi::import_slp(read_file(a.slp_file));
    opt.slp = &imported;
  }
  const gsi::SelfIndex idx = gsi::build_index(text, opt);
  write_file(a.output, gsi::save_index(idx));
  std::cerr << "indexed " << idx.n() << " bytes into " << idx.z()
            << " phrases: " << a.output << "\n";
}

// ---- locate ----

struct LocateArgs {
  std::string index;
  std::vector<std::string> patterns;
  std::vector<std::string> pattern_files;
  bool json = false;
  bool verify_occurrences = false;
  uint32_t threads = 1;
};

void run_locate(const LocateArgs& a) {
  const gsi::SelfIndex idx = load_index_file(a.index);
  std::vector<gsi::Bytes> patterns(a.patterns.begin(), a.patterns.end());
  for (const std::string& f : a.pattern_files)
    patterns.push_back(read_file(f));

  gsi::QueryOptions qopt;
  qopt.verify_occurrences = a.verify_occurrences;
  std::vector<std::vector<gsi::Occurrence>> results(patterns.size());
  if (a.threads <= 1 || patterns.size() <= 1) {
    for (size_t i = 0; i < patterns.size(); ++i)
      results[i] = gsi::locate(idx, patterns[i], qopt);
  } else {
    const size_t workers =
        std::min<size_t>(a.threads, patterns.size());
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errs(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t t = 0; t < workers; ++t)
      pool.emplace_back([&, t] {
        try {
          for (size_t i; (i = next.fetch_add(1)) < patterns.size();)
            results[i] = gsi::locate(idx, patterns[i], qopt);
        } catch (...) {
          errs[t] = std::current_exception();
        }
      });
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& e : errs)
      if (e) std::rethrow_exception(e);
  }

  for (size_t i = 0; i < results.size(); ++i) {
    if (a.json) {
      std::cout << json_of(results[i]) << "\n";
    } else {
      if (results.size() > 1) std::cout << "pattern " << i + 1 << ":\n";
      for (const gsi::Occurrence& o : results[i]) std::cout << o.pos << "\n";
    }
  }
}

// ---- selftest ----

std::vector<uint64_t> scan_positions(gsi::ByteView text, gsi::ByteView pat) {
  std::vector<uint64_t> out;
  for (size_t at = text.find(pat); at != gsi::ByteView::npos;
       at = text.find(pat, at + 1))
    out.push_back(uint64_t(at) + 1);
  return out;
}

void expect(bool ok, const std::string& what) {
  if (!ok)
    gsi::fail(gsi::errc::verification_failed, "selftest check: " + what);
  std::cout << "ok: " << what << "\n";
}

void run_selftest() {
  const gsi::Bytes example = "abaababaabaab";
  for (const char* mode : {"verify", "fingerprint"}) {
    gsi::BuildOptions opt;
    opt.mode = mode == std::string("verify") ? gsi::IndexMode::verify
                                             : gsi::IndexMode::fingerprint;
    const gsi::SelfIndex idx = gsi::build_index(example, opt);
    std::vector<uint64_t> pos;
    for (const gsi::Occurrence& o : gsi::locate(idx, "ab")) pos.push_back(o.pos);
    expect(pos == std::vector<uint64_t>{1, 4, 6, 9, 12},
           std::string(mode) + " locate on the worked example");
    expect(gsi::count(idx, "ba") == 4,
           std::string(mode) + " count on the worked example");
    expect(gsi::extract(idx, 8, 5) == "aabaa",
           std::string(mode) + " extract on the worked example");
    expect(gsi::cyclic_matches(idx, "ba") == std::vector<uint64_t>{0, 1},
           std::string(mode) + " rotation matching");
    expect(gsi::maximal_substrings(idx, "bb") ==
               std::vector<std::pair<uint64_t, uint64_t>>{{1, 1}, {2, 2}},
           std::string(mode) + " maximal occurring intervals");
    const gsi::Bytes file = gsi::save_index(idx);
    expect(gsi::load_index(file) == idx,
           std::string(mode) + " save/load round trip");
    expect(gsi::save_index(gsi::load_index(file)) == file,
           std::string(mode) + " byte-identical resave");
  }

  const gsi::Bytes corpus = gsi::gen_corpus(350, 18, 0.002, 7);
  for (const gsi::IndexMode mode :
       {gsi::IndexMode::verify, gsi::IndexMode::fingerprint}) {
    gsi::BuildOptions opt;
    opt.mode = mode;
    const gsi::SelfIndex idx = gsi::build_index(corpus, opt);
    gsi::QueryOptions qopt;
    qopt.verify_occurrences = true;
    bool all = true;
    for (const size_t from : {size_t(0), size_t(41), size_t(200)}) {
      const gsi::Bytes probe = corpus.substr(from, 12);
      std::vector<uint64_t> pos;
      for (const gsi::Occurrence& o : gsi::locate(idx, probe, qopt))
        pos.push_back(o.pos);
      all = all && pos == scan_positions(corpus, probe);
    }
    all = all && gsi::locate(idx, "zzzz", qopt).empty();
    expect(all, std::string(mode == gsi::IndexMode::verify ? "verify"
                                                           : "fingerprint") +
                    " locate agrees with a direct scan on a generated corpus");
    expect(gsi::extract(idx, 10, 30) == corpus.substr(9, 30),
           "extraction agrees with the generated corpus");
  }

  // Identical copies must cost O(1) phrases each.
  const uint64_t z1 = gsi::build_index(gsi::gen_corpus(500, 1, 0, 3), {}).z();
  const uint64_t z16 =
      gsi::build_index(gsi::gen_corpus(500, 16, 0, 3), {}).z();
  expect(z16 <= z1 + 16 * 8, "phrase count grows O(copies) on identical copies");

  std::cout << "selftest passed\n";
}

// ---- stats ----

void run_stats(const std::string& index_path) {
  const gsi::Bytes file = read_file(index_path);
  const gsi::SelfIndex idx = gsi::load_index(file);
  const gsi::IndexStats st = gsi::stats(idx);
  std::cout << "n: " << st.n << "\n"
            << "z: " << st.z << "\n"
            << "n-prime: " << st.n_prime << "\n"
            << "rules-text: " << st.rules_text << "\n"
            << "rules-reduced: " << st.rules_reduced << "\n"
            << "height-text: " << st.height_text << "\n"
            << "height-reduced: " << st.height_reduced << "\n"
            << "mode: "
            << (st.mode == gsi::IndexMode::verify ? "verify" : "fingerprint")
            << "\n"
            << "alphabet: " << st.sigma << "\n"
            << "radius: " << st.radius << "\n"
            << "section-bytes:\n";
  for (const auto& [name, size] : gsi::section_sizes(file))
    std::cout << "  " << name << ": " << size << "\n";
  std::cout << "file-bytes: " << file.size() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressed self-index for highly repetitive strings"};
  app.require_subcommand(1);

  BuildArgs build_args;
  CLI::App* build = app.add_subcommand(
      "build", "Build an index from a text file and save it");
  build->add_option("-i,--input", build_args.input, "Text file (raw bytes)")
      ->required();
  build->add_option("-o,--output", build_args.output, "Index file to write")
      ->required();
  build
      ->add_option("--mode", build_args.mode,
                   "Search mode: fp (fingerprint) or verify")
      ->check(CLI::IsMember({"fp", "fingerprint", "verify"}));
  build->add_option("--c", build_args.c,
                    "Boundary window multiplier (>= 2, default 4)");
  build->add_option("--seed", build_args.seed,
                    "Seed for the hash parameters (default 1)");
  build->add_option("--slp", build_args.slp_file,
                    "Grammar listing to import instead of building one");
  build->callback([&] { run_build(build_args); });

  LocateArgs locate_args;
  CLI::App* locate = app.add_subcommand(
      "locate", "List all occurrences of patterns, ascending");
  locate->add_option("-x,--index", locate_args.index, "Index file")
      ->required();
  locate->add_option("-p,--pattern", locate_args.patterns,
                     "Pattern (repeatable)");
  locate->add_option("--pattern-file", locate_args.pattern_files,
                     "File whose raw bytes form one pattern (repeatable, "
                     "after -p patterns)");
  locate->add_flag("--json", locate_args.json,
                   "One JSON array per pattern: [{\"pos\":1,\"kind\":...}]");
  locate->add_flag("--verify-occurrences", locate_args.verify_occurrences,
                   "Re-extract and compare every reported occurrence");
  locate
      ->add_option("--threads", locate_args.threads,
                   "Worker threads for multi-pattern batches (default 1)")
      ->check(CLI::Range(1u, 256u));
  locate->callback([&] {
    if (locate_args.patterns.empty() && locate_args.pattern_files.empty())
      throw CLI::ValidationError(
          "locate needs at least one -p or --pattern-file");
    run_locate(locate_args);
  });

  std::string count_index, count_pattern;
  CLI::App* count =
      app.add_subcommand("count", "Print the number of occurrences");
  count->add_option("-x,--index", count_index, "Index file")->required();
  count->add_option("-p,--pattern", count_pattern, "Pattern")->required();
  count->callback([&] {
    std::cout << gsi::count(load_index_file(count_index), count_pattern)
              << "\n";
  });

  std::string extract_index;
  uint64_t extract_from = 0, extract_len = 0;
  CLI::App* extract = app.add_subcommand(
      "extract", "Print a substring of the indexed text");
  extract->add_option("-x,--index", extract_index, "Index file")->required();
  extract->add_option("--from", extract_from, "Start position (1-based)")
      ->required();
  extract->add_option("--len", extract_len, "Length in bytes")->required();
  extract->callback([&] {
    const gsi::Bytes part =
        gsi::extract(load_index_file(extract_index), extract_from, extract_len);
    std::cout.write(part.data(), std::streamsize(part.size()));
    std::cout << "\n";
  });

  std::string cyclic_index, cyclic_pattern;
  CLI::App* cyclic = app.add_subcommand(
      "cyclic", "List the rotation amounts of the pattern that occur");
  cyclic->add_option("-x,--index", cyclic_index, "Index file")->required();
  cyclic->add_option("-p,--pattern", cyclic_pattern, "Pattern")->required();
  cyclic->callback([&] {
    for (uint64_t j :
         gsi::cyclic_matches(load_index_file(cyclic_index), cyclic_pattern))
      std::cout << j << "\n";
  });

  std::string maximal_index, maximal_pattern;
  CLI::App* maximal = app.add_subcommand(
      "maximal",
      "List the maximal pattern intervals that occur, as 'start end'");
  maximal->add_option("-x,--index", maximal_index, "Index file")->required();
  maximal->add_option("-p,--pattern", maximal_pattern, "Pattern")->required();
  maximal->callback([&] {
    for (const auto& [s, e] : gsi::maximal_substrings(
             load_index_file(maximal_index), maximal_pattern))
      std::cout << s << " " << e << "\n";
  });

  std::string stats_index;
  CLI::App* stats =
      app.add_subcommand("stats", "Print index statistics and section sizes");
  stats->add_option("-x,--index", stats_index, "Index file")->required();
  stats->callback([&] { run_stats(stats_index); });

  std::string gen_out;
  uint64_t gen_base = 1000, gen_copies = 10, gen_seed = 1;
  double gen_rate = 0.001;
  CLI::App* gen = app.add_subcommand(
      "gen", "Generate a repetitive corpus: a random base plus mutated copies");
  gen->add_option("--base-len", gen_base, "Base string length (default 1000)");
  gen->add_option("--copies", gen_copies, "Number of copies (default 10)");
  gen->add_option("--mut-rate", gen_rate,
                  "Per-character substitution probability (default 0.001)")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", gen_seed, "Random seed (default 1)");
  gen->add_option("-o,--output", gen_out, "Corpus file to write")->required();
  gen->callback([&] {
    const gsi::Bytes corpus =
        gsi::gen_corpus(gen_base, gen_copies, gen_rate, gen_seed);
    write_file(gen_out, corpus);
    std::cerr << "wrote " << corpus.size() << " bytes: " << gen_out << "\n";
  });

  CLI::App* selftest = app.add_subcommand(
      "selftest", "Build small indexes and check them against direct scans");
  selftest->callback([&] { run_selftest(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the usage error
    return code == 0 ? 0 : 2;
  } catch (const gsi::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
