// Command line access to the Hilbert series calculator, the candidate
// deduction, the basket enumeration and the candidate database.
//
// Exit codes: 0 success, 1 invalid input, 2 empty result (no
// candidate, no match, denominator does not clear), 3 verification
// failure.

#include <chrono>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "k3db/candidate.hpp"
#include "k3db/database.hpp"
#include "k3db/enumerate.hpp"
#include "k3db/formulas.hpp"
#include "k3db/lattice.hpp"
#include "k3db/projection.hpp"

namespace {

using nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyResult : std::runtime_error {
  explicit EmptyResult(const std::string& what) : std::runtime_error(what) {}
};

ordered_json basket_json(const k3db::Basket& b) {
  auto arr = ordered_json::array();
  for (const auto& s : b) arr.push_back({s.r, s.a});
  return arr;
}

ordered_json poly_json(const k3db::Poly& p) {
  auto arr = ordered_json::array();
  for (int e = 0; e <= p.degree(); ++e)
    if (!p.coeff(e).is_zero()) arr.push_back({e, static_cast<long long>(p.coeff(e).as_int())});
  return arr;
}

ordered_json candidate_json(const k3db::CandidateRecord& rec) {
  ordered_json j;
  if (rec.id > 0) j["id"] = rec.id;
  j["kind"] = k3db::kind_str(rec.kind);
  j["codim"] = rec.codim;
  j["genus"] = rec.genus;
  j["weights"] = rec.weights;
  j["basket"] = basket_json(rec.basket);
  j["numerator"] = poly_json(rec.numerator);
  j["degree"] = rec.degree.str_pq();
  return j;
}

std::vector<int> parse_weight_list(const std::string& text) {
  std::vector<int> w;
  std::string tok;
  for (char ch : text + ",") {
    if (ch == ' ' || ch == '\t') continue;
    if (ch == ',') {
      if (!tok.empty()) {
        try {
          w.push_back(std::stoi(tok));
        } catch (const std::exception&) {
          throw k3db::IoError("bad weight '" + tok + "'");
        }
        tok.clear();
      }
    } else {
      tok += ch;
    }
  }
  if (w.empty()) throw k3db::IoError("empty weight list");
  std::sort(w.begin(), w.end());
  return w;
}

std::string chain_row(const k3db::ChainStep& s) {
  std::string out = "(" + std::to_string(s.id) + ", " + std::to_string(s.codim) + ")";
  if (s.centre) {
    out += " [" + std::to_string(s.centre->r) + "," + std::to_string(s.centre->a) + "," +
           std::to_string(s.centre->r - s.centre->a) + "] -> " + std::to_string(*s.image);
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Hilbert series of polarised orbifolds and the graded-ring candidate database"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "Output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  std::string order = "desc";
  app.add_option("--order", order, "Polynomial term order: desc or asc")
      ->check(CLI::IsMember({"desc", "asc"}));

  // hilbert
  auto* hilbert = app.add_subcommand("hilbert", "Hilbert series of one numerical datum");
  std::string h_kind = "k3", h_basket;
  int h_genus = 0;
  std::optional<int> h_terms;
  std::optional<std::string> h_weights;
  hilbert->add_option("--kind", h_kind, "curve, k3 or fano")
      ->check(CLI::IsMember({"curve", "k3", "fano"}));
  hilbert->add_option("--genus", h_genus, "genus of the numerical datum")->required();
  hilbert->add_option("--basket", h_basket,
                      "basket: 'r/a,r/a,...', bare orders 'r,r,...' for curves");
  hilbert->add_option("--terms", h_terms, "print the coefficients of t^0..t^N");
  hilbert->add_option("--weights", h_weights, "clear the denominator for these weights");

  // candidate
  auto* candidate = app.add_subcommand("candidate", "Deduce an embedding candidate");
  std::string c_kind = "k3", c_basket, c_overrides;
  int c_genus = 0;
  bool c_no_overrides = false;
  candidate->add_option("--kind", c_kind, "k3 or fano")->check(CLI::IsMember({"k3", "fano"}));
  candidate->add_option("--genus", c_genus, "genus of the numerical datum")->required();
  candidate->add_option("--basket", c_basket, "basket 'r/a,r/a,...'");
  auto* c_ov_opt = candidate->add_option("--overrides", c_overrides,
                                         "curated weights table replacing the built-in one");
  candidate->add_flag("--no-overrides", c_no_overrides, "deduce from the series alone")
      ->excludes(c_ov_opt);

  // baskets
  auto* baskets = app.add_subcommand("baskets", "Enumerate baskets with their minimal genus");
  int b_bound = 20;
  std::string b_kind = "k3";
  bool b_include_empty = true;
  baskets->add_option("--bound", b_bound, "enumeration bound");
  baskets->add_option("--kind", b_kind, "k3 or fano")->check(CLI::IsMember({"k3", "fano"}));
  baskets->add_flag("--include-empty,!--exclude-empty", b_include_empty,
                    "count the empty basket (default on)");

  // db
  auto* db = app.add_subcommand("db", "Build and query the candidate database");
  db->require_subcommand(1);

  auto* db_build = db->add_subcommand("build", "Scan all baskets and write a database file");
  std::string build_out, build_kind = "k3", build_overrides;
  int build_max_codim = 4, build_bound = 20, build_jobs = 1;
  bool build_no_overrides = false;
  db_build->add_option("--out", build_out, "output JSONL path")->required();
  db_build->add_option("--kind", build_kind, "k3 or fano")->check(CLI::IsMember({"k3", "fano"}));
  db_build->add_option("--max-codim", build_max_codim, "largest codimension kept");
  db_build->add_option("--bound", build_bound, "basket enumeration bound");
  db_build->add_option("--jobs", build_jobs, "worker threads")->check(CLI::PositiveNumber);
  auto* b_ov_opt = db_build->add_option("--overrides", build_overrides,
                                        "curated weights table replacing the built-in one");
  db_build->add_flag("--no-overrides", build_no_overrides, "build from the series alone")
      ->excludes(b_ov_opt);

  auto* db_search = db->add_subcommand("search", "Select records by simple predicates");
  std::string search_file;
  std::optional<int> search_index, search_codim, search_genus;
  std::optional<std::string> search_weights;
  db_search->add_option("--file", search_file, "database JSONL path")->required();
  db_search->add_option("--index", search_index, "basket contains a singularity of this index");
  db_search->add_option("--weights", search_weights, "weight multiset equals 'w,w,...'");
  db_search->add_option("--codim", search_codim, "codimension equals");
  db_search->add_option("--genus", search_genus, "genus equals");

  auto* db_centres = db->add_subcommand("centres", "Recompute and report projection centres");
  std::string centres_file, centres_out;
  db_centres->add_option("--file", centres_file, "database JSONL path")->required();
  db_centres->add_option("--out", centres_out, "write the re-annotated database here");

  auto* db_chains = db->add_subcommand("chains", "Print all Type I projection chains");
  std::string chains_file;
  std::optional<int> chains_id;
  std::optional<std::string> chains_weights;
  db_chains->add_option("--file", chains_file, "database JSONL path")->required();
  db_chains->add_option("--id", chains_id, "start record id");
  db_chains->add_option("--weights", chains_weights, "start record by weight multiset");

  auto* verify = app.add_subcommand("verify", "Re-derive and cross-check a database file");
  std::string verify_file;
  verify->add_option("--file", verify_file, "database JSONL path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  bool ascending = order == "asc";
  bool json_out = format == "json";

  if (*hilbert) {
    k3db::Kind kind = k3db::kind_parse(h_kind);
    k3db::Basket basket;
    if (kind == k3db::Kind::Curve) {
      for (int r : k3db::curve_basket_parse(h_basket)) basket.emplace_back(r, 1);
    } else {
      basket = k3db::basket_parse(h_basket);
    }
    auto series = k3db::hilbert_series(kind, h_genus, basket);
    if (h_weights) {
      auto w = parse_weight_list(*h_weights);
      k3db::Poly num = k3db::clear_denominator(series, w);
      if (json_out) {
        ordered_json j;
        j["kind"] = h_kind;
        j["genus"] = h_genus;
        j["basket"] = basket_json(basket);
        j["weights"] = w;
        j["numerator"] = poly_json(num);
        std::cout << j.dump() << "\n";
      } else {
        std::cout << k3db::poly_str(num, ascending) << "\n";
      }
      return 0;
    }
    int terms = h_terms.value_or(12);
    if (terms < 0) throw UsageError("--terms must be nonnegative");
    auto coeffs = k3db::expr_expand(series, terms);
    if (json_out) {
      ordered_json j;
      j["kind"] = h_kind;
      j["genus"] = h_genus;
      j["basket"] = basket_json(basket);
      auto arr = ordered_json::array();
      for (const auto& c : coeffs) arr.push_back(c.str());
      j["terms"] = std::move(arr);
      j["degree"] = k3db::degree(kind, h_genus, basket).str_pq();
      std::cout << j.dump() << "\n";
    } else {
      std::string line;
      for (const auto& c : coeffs) {
        if (!line.empty()) line += ", ";
        line += c.str();
      }
      std::cout << line << "\n";
    }
    return 0;
  }

  if (*candidate) {
    k3db::Overrides ov = c_no_overrides ? k3db::Overrides{} : k3db::Overrides::builtin();
    if (!c_overrides.empty()) ov = k3db::Overrides::load_file(c_overrides);
    auto rec = k3db::make_candidate(k3db::kind_parse(c_kind), c_genus,
                                    k3db::basket_parse(c_basket), ov);
    if (json_out)
      std::cout << candidate_json(rec).dump() << "\n";
    else
      std::cout << k3db::candidate_block(rec, ascending);
    return 0;
  }

  if (*baskets) {
    if (b_kind == "fano") {
      int count = 0;
      k3db::for_each_fano_basket(b_bound, nullptr, [&](const k3db::Basket& b) {
        if (b.empty() && !b_include_empty) return;
        ++count;
        if (!json_out) {
          std::cout << (b.empty() ? "(empty)" : k3db::basket_str(b)) << "\n";
        }
      });
      if (json_out) {
        ordered_json j;
        j["kind"] = "fano";
        j["bound"] = b_bound;
        j["count"] = count;
        std::cout << j.dump() << "\n";
      } else {
        std::cout << "count: " << count << "\n";
      }
      return 0;
    }
    auto enumeration = k3db::enumerate_k3_baskets(b_bound, b_include_empty);
    if (json_out) {
      ordered_json j;
      j["kind"] = "k3";
      j["bound"] = b_bound;
      j["count"] = enumeration.items.size();
      auto items = ordered_json::array();
      for (const auto& it : enumeration.items) {
        ordered_json ji;
        ji["basket"] = basket_json(it.basket);
        ji["min_genus"] = it.min_genus;
        items.push_back(std::move(ji));
      }
      j["items"] = std::move(items);
      auto ecc = ordered_json::array();
      for (const auto& e : enumeration.eccentrics) {
        ordered_json je;
        je["genus"] = e.genus;
        je["basket"] = basket_json(e.basket);
        ecc.push_back(std::move(je));
      }
      j["eccentrics"] = std::move(ecc);
      std::cout << j.dump() << "\n";
    } else {
      for (const auto& it : enumeration.items)
        std::cout << (it.basket.empty() ? "(empty)" : k3db::basket_str(it.basket))
                  << "  g=" << it.min_genus << "\n";
      for (const auto& e : enumeration.eccentrics)
        std::cerr << "eccentric: genus " << e.genus << " basket " << k3db::basket_str(e.basket)
                  << "\n";
      std::cout << "count: " << enumeration.items.size() << "\n";
    }
    return 0;
  }

  if (*db_build) {
    k3db::Overrides ov = build_no_overrides ? k3db::Overrides{} : k3db::Overrides::builtin();
    if (!build_overrides.empty()) ov = k3db::Overrides::load_file(build_overrides);
    auto t0 = std::chrono::steady_clock::now();
    auto database = k3db::Database::build(k3db::kind_parse(build_kind), build_max_codim,
                                          build_bound, ov, build_jobs, &std::cerr);
    auto t1 = std::chrono::steady_clock::now();
    database.save(build_out);
    double secs = std::chrono::duration<double>(t1 - t0).count();
    std::cerr << "built in " << secs << "s\n";
    std::string hist;
    for (auto [codim, n] : database.codim_histogram())
      hist += (hist.empty() ? "" : ", ") + std::to_string(codim) + ":" + std::to_string(n);
    std::cout << database.records.size() << " records (" << hist << ") -> " << build_out << "\n";
    return 0;
  }

  if (*db_search) {
    auto database = k3db::Database::load(search_file);
    k3db::Database::Query q;
    q.index = search_index;
    q.codim = search_codim;
    q.genus = search_genus;
    if (search_weights) q.weights = parse_weight_list(*search_weights);
    auto hits = database.search(q);
    for (const auto* r : hits) {
      if (json_out)
        std::cout << k3db::Database::record_line(*r) << "\n";
      else
        std::cout << k3db::candidate_block(*r, ascending);
    }
    std::cerr << hits.size() << " match(es)\n";
    if (hits.empty()) throw EmptyResult("no record matches the query");
    return 0;
  }

  if (*db_centres) {
    auto database = k3db::Database::load(centres_file);
    database.compute_centres(&std::cerr);
    int unresolved = database.verify(&std::cerr);
    if (!centres_out.empty()) database.save(centres_out);
    for (const auto& rec : database.records) {
      if (rec.centres.empty()) continue;
      std::cout << "Record " << rec.id << ", " << rec.name << ":\n";
      int i = 0;
      for (const auto& c : rec.centres) {
        std::cout << "  Centre " << ++i << ": [" << c.sing.r << "," << c.sing.a << ","
                  << c.sing.r - c.sing.a << "]";
        if (!c.type_i) {
          std::cout << " unclassified\n";
        } else if (c.image_id) {
          const auto* img = database.by_id(*c.image_id);
          std::cout << " has Type I projection to " << *c.image_id << " in codim " << img->codim
                    << "\n";
        } else {
          std::cout << " has Type I projection with image not in database\n";
        }
      }
    }
    std::cerr << unresolved << " projection-shaped centre(s) without an image record\n";
    return 0;
  }

  if (*db_chains) {
    if (!chains_id && !chains_weights) throw UsageError("db chains needs --id or --weights");
    auto database = k3db::Database::load(chains_file);
    int start = 0;
    if (chains_id) {
      start = *chains_id;
    } else if (chains_weights) {
      k3db::Database::Query q;
      q.weights = parse_weight_list(*chains_weights);
      auto hits = database.search(q);
      if (hits.empty()) throw EmptyResult("no record with weights " + *chains_weights);
      if (hits.size() > 1) throw UsageError("weights select more than one record");
      start = hits.front()->id;
    }
    auto chains = database.projection_chains(start, &std::cerr);
    if (json_out) {
      auto arr = ordered_json::array();
      for (const auto& chain : chains) {
        auto jc = ordered_json::array();
        for (const auto& step : chain) {
          ordered_json js;
          js["id"] = step.id;
          js["codim"] = step.codim;
          if (step.centre)
            js["centre"] = {step.centre->r, step.centre->a, step.centre->r - step.centre->a};
          else
            js["centre"] = nullptr;
          if (step.image)
            js["image"] = *step.image;
          else
            js["image"] = nullptr;
          jc.push_back(std::move(js));
        }
        arr.push_back(std::move(jc));
      }
      std::cout << arr.dump() << "\n";
    } else {
      bool first = true;
      for (const auto& chain : chains) {
        if (!first) std::cout << "\n";
        first = false;
        for (const auto& step : chain) std::cout << chain_row(step) << "\n";
      }
    }
    return 0;
  }

  if (*verify) {
    auto database = k3db::Database::load(verify_file);
    int unresolved = database.verify(&std::cerr);
    std::cout << "ok: " << database.records.size() << " records, " << unresolved
              << " projection-shaped centre(s) without an image record\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const EmptyResult& e) {
    std::cerr << "empty result: " << e.what() << "\n";
    return 2;
  } catch (const k3db::NoCandidate& e) {
    std::cerr << "no candidate: " << e.what() << "\n";
    return 2;
  } catch (const k3db::NotPolynomial& e) {
    std::cerr << "not a polynomial: " << e.what() << "\n";
    return 2;
  } catch (const k3db::NotTypeI& e) {
    std::cerr << "not Type I: " << e.what() << "\n";
    return 2;
  } catch (const k3db::FormatVersionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const k3db::ChecksumMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
