#pragma once

#include <atomic>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "k3db/candidate.hpp"
#include "k3db/digest.hpp"
#include "k3db/enumerate.hpp"
#include "k3db/errors.hpp"
#include "k3db/projection.hpp"

namespace k3db {

struct DbRecord : CandidateRecord {
  std::vector<Centre> centres;
};

// One row of a projection chain; the terminal row carries no centre.
struct ChainStep {
  int id = 0;
  int codim = 0;
  std::optional<QuotientSingularity> centre;
  std::optional<int> image;
};

// Collection of candidate records with stable ids, persisted as JSONL.
class Database {
 public:
  static constexpr int kFormatVersion = 1;

  Kind kind = Kind::K3;
  int max_codim = 4;
  int bound = 20;
  std::string overrides_digest;
  std::vector<DbRecord> records;  // id order, ids dense from 1

  // Scans every basket of the enumeration from its minimal genus
  // upwards, keeping candidates of codimension <= max_codim and
  // stopping a basket at the first genus that exceeds it.  The stop is
  // probed three genera ahead; a later genus dropping back inside the
  // bound would break the scan's premise and is reported.  Results are
  // independent of the number of worker threads.
  static Database build(Kind kind, int max_codim, int bound, const Overrides& overrides = {},
                        int jobs = 1, std::ostream* log = nullptr) {
    Database db;
    db.kind = kind;
    db.max_codim = max_codim;
    db.bound = bound;
    db.overrides_digest = sha256_hex(overrides.source());

    std::vector<BasketGenus> tasks;
    if (kind == Kind::K3) {
      tasks = enumerate_k3_baskets(bound).items;
    } else if (kind == Kind::Fano) {
      for_each_fano_basket(bound, nullptr, [&tasks](const Basket& b) {
        tasks.push_back({b, min_genus(Kind::Fano, b)});
      });
    } else {
      throw std::invalid_argument("Database::build: curve databases are not defined");
    }

    std::vector<std::vector<CandidateRecord>> found(tasks.size());
    std::vector<std::vector<std::string>> notes(tasks.size());
    std::atomic<size_t> next{0};
    int n_threads = std::max(1, jobs);
    std::vector<std::exception_ptr> failures(static_cast<size_t>(n_threads));
    auto worker = [&](size_t slot) {
      try {
        for (size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
          found[i] = scan_basket(kind, max_codim, tasks[i], overrides, notes[i]);
      } catch (...) {
        failures[slot] = std::current_exception();
      }
    };
    if (n_threads == 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker, static_cast<size_t>(i));
      for (auto& t : pool) t.join();
    }
    for (const auto& f : failures)
      if (f) std::rethrow_exception(f);

    for (size_t i = 0; i < tasks.size(); ++i) {
      if (log)
        for (const auto& n : notes[i]) *log << n << "\n";
      for (auto& rec : found[i]) {
        DbRecord r;
        static_cast<CandidateRecord&>(r) = std::move(rec);
        db.records.push_back(std::move(r));
      }
    }
    db.apply_projection_filter(overrides, log);
    db.sort_and_number();
    db.compute_centres(log);
    return db;
  }

  // Annotates every record with its centres and resolves each
  // projection-shaped centre against the database.  Type I is claimed
  // only once the image datum matches a record exactly; a centre whose
  // image is missing stays unclassified and is reported, since its
  // numerical projection has nowhere to land.
  void compute_centres(std::ostream* log = nullptr) {
    for (auto& rec : records) {
      rec.centres = find_centres(rec);
      for (auto& c : rec.centres) {
        if (!c.type_i) continue;
        auto [basket, weights] = type1_image_data(rec, c.sing);
        const DbRecord* img = find(rec.genus, basket, weights);
        if (img) {
          c.image_id = img->id;
        } else {
          c.type_i = false;
          if (log)
            *log << "image not in database: record " << rec.id << " centre " << c.sing.r << "/"
                 << c.sing.a << " -> genus " << rec.genus << " basket " << basket_str(basket)
                 << " weights " << weights_str(weights) << "\n";
        }
      }
    }
  }

  const DbRecord* by_id(int id) const {
    if (id < 1 || id > static_cast<int>(records.size())) return nullptr;
    return &records[static_cast<size_t>(id) - 1];
  }

  const DbRecord* find(int genus, const Basket& basket, const std::vector<int>& weights) const {
    for (const auto& r : records)
      if (r.genus == genus && r.basket == basket && r.weights == weights) return &r;
    return nullptr;
  }

  struct Query {
    std::optional<int> index;                        // basket contains an element of this index
    std::optional<std::vector<int>> weights;         // weight multiset equals
    std::optional<std::vector<int>> weights_contain; // weight multiset contains
    std::optional<int> codim;
    std::optional<int> genus;
    std::optional<int> numerator_degree;
  };

  std::vector<const DbRecord*> search(const Query& q) const {
    std::vector<const DbRecord*> out;
    for (const auto& r : records) {
      if (q.index && !std::any_of(r.basket.begin(), r.basket.end(),
                                  [&](const QuotientSingularity& s) { return s.r == *q.index; }))
        continue;
      if (q.weights) {
        std::vector<int> w = *q.weights;
        std::sort(w.begin(), w.end());
        if (r.weights != w) continue;
      }
      if (q.weights_contain && !contains_multiset(r.weights, *q.weights_contain)) continue;
      if (q.codim && r.codim != *q.codim) continue;
      if (q.genus && r.genus != *q.genus) continue;
      if (q.numerator_degree && r.numerator.degree() != *q.numerator_degree) continue;
      out.push_back(&r);
    }
    return out;
  }

  // Every maximal chain of Type I projections out of the given record.
  // Centres are followed in (r, a) order with duplicates collapsed; a
  // Type I centre whose image is missing from the database ends the
  // branch and is reported.
  std::vector<std::vector<ChainStep>> projection_chains(int id, std::ostream* log = nullptr) const {
    const DbRecord* start = by_id(id);
    if (!start) throw IoError("projection_chains: no record with id " + std::to_string(id));
    std::vector<std::vector<ChainStep>> chains;
    std::vector<ChainStep> path;
    std::function<void(const DbRecord&)> dfs = [&](const DbRecord& rec) {
      std::vector<Centre> followable;
      std::set<std::pair<int, int>> seen;
      for (const auto& c : rec.centres) {
        if (!c.type_i) continue;
        if (!seen.insert({c.sing.r, c.sing.a}).second) continue;
        if (!c.image_id) {
          if (log)
            *log << "chain stops: record " << rec.id << " centre " << c.sing.r << "/" << c.sing.a
                 << " image not in database\n";
          continue;
        }
        followable.push_back(c);
      }
      if (followable.empty()) {
        path.push_back({rec.id, rec.codim, std::nullopt, std::nullopt});
        chains.push_back(path);
        path.pop_back();
        return;
      }
      for (const auto& c : followable) {
        path.push_back({rec.id, rec.codim, c.sing, c.image_id});
        dfs(*by_id(*c.image_id));
        path.pop_back();
      }
    };
    dfs(*start);
    return chains;
  }

  // Exact JSONL image: header line with metadata and the content
  // digest, then one record per line.  The digest is the SHA-256 of the
  // record lines, each with its terminating newline.
  std::string to_jsonl() const {
    std::string body;
    for (const auto& r : records) body += record_line(r) + "\n";
    nlohmann::ordered_json h;
    h["format"] = "k3db";
    h["version"] = kFormatVersion;
    h["kind"] = kind_str(kind);
    h["max_codim"] = max_codim;
    h["bound"] = bound;
    h["overrides_digest"] = overrides_digest;
    h["records"] = records.size();
    h["digest"] = sha256_hex(body);
    return h.dump() + "\n" + body;
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("save: cannot open " + path);
    out << to_jsonl();
    if (!out) throw IoError("save: write failed for " + path);
  }

  static Database load(const std::string& path, bool validate = true) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("load: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_jsonl(buf.str(), validate);
  }

  static Database from_jsonl(const std::string& text, bool validate = true) {
    auto eol = text.find('\n');
    if (eol == std::string::npos) throw IoError("load: missing header line");
    nlohmann::json h;
    try {
      h = nlohmann::json::parse(text.substr(0, eol));
    } catch (const nlohmann::json::exception& e) {
      throw IoError(std::string("load: bad header: ") + e.what());
    }
    if (h.value("format", "") != "k3db") throw IoError("load: not a k3db file");
    if (h.value("version", -1) != kFormatVersion)
      throw FormatVersionMismatch("load: format version " + h["version"].dump() +
                                  ", expected " + std::to_string(kFormatVersion));
    Database db;
    try {
      db.kind = kind_parse(h.at("kind").get<std::string>());
      db.max_codim = h.at("max_codim").get<int>();
      db.bound = h.at("bound").get<int>();
      db.overrides_digest = h.at("overrides_digest").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw IoError(std::string("load: bad header field: ") + e.what());
    }

    std::string body = text.substr(eol + 1);
    if (sha256_hex(body) != h.value("digest", ""))
      throw ChecksumMismatch("load: content digest mismatch");

    size_t pos = 0;
    while (pos < body.size()) {
      auto end = body.find('\n', pos);
      if (end == std::string::npos) end = body.size();
      db.records.push_back(parse_record(body.substr(pos, end - pos)));
      pos = end + 1;
    }
    if (db.records.size() != h.value("records", size_t{0}))
      throw ChecksumMismatch("load: record count mismatch");
    for (size_t i = 0; i < db.records.size(); ++i)
      if (db.records[i].id != static_cast<int>(i) + 1)
        throw ChecksumMismatch("load: ids not dense at position " + std::to_string(i));
    db.assign_names();
    if (validate) db.validate_records();
    return db;
  }

  // Re-derives every record from its numerical data and checks the
  // stored fields, uniqueness, centre classification, the exact
  // projection identities for every Type I centre, and acyclicity of
  // the projection graph.  Returns the number of projection-shaped
  // centres left unclassified for want of an image record.
  int verify(std::ostream* log = nullptr) const {
    validate_records();
    int unresolved = 0;
    for (const auto& rec : records) {
      auto expect = find_centres(rec);
      if (expect.size() != rec.centres.size())
        throw ChecksumMismatch("verify: centre list of record " + std::to_string(rec.id));
      for (size_t i = 0; i < expect.size(); ++i) {
        const Centre& stored = rec.centres[i];
        if (!(expect[i].sing == stored.sing))
          throw ChecksumMismatch("verify: centre mismatch on record " + std::to_string(rec.id));
        if (!expect[i].type_i) {
          // Coordinates missing: never Type I, never an image.
          if (stored.type_i || stored.image_id)
            throw ChecksumMismatch("verify: spurious Type I on record " + std::to_string(rec.id));
          continue;
        }
        auto [basket, weights] = type1_image_data(rec, stored.sing);
        const DbRecord* img = find(rec.genus, basket, weights);
        if (!img) {
          if (stored.type_i || stored.image_id)
            throw ChecksumMismatch("verify: image id mismatch on record " + std::to_string(rec.id));
          ++unresolved;
          if (log)
            *log << "verify: no image record for record " << rec.id << " centre " << stored.sing.r
                 << "/" << stored.sing.a << "\n";
          continue;
        }
        if (!stored.type_i || stored.image_id != std::optional<int>(img->id))
          throw ChecksumMismatch("verify: image id mismatch on record " + std::to_string(rec.id));
        try {
          verify_projection(rec, *img, stored.sing);
        } catch (const std::logic_error& e) {
          throw ChecksumMismatch(std::string("verify: ") + e.what());
        }
        if (rec.codim - img->codim != 1 && log)
          *log << "verify: codim drop " << rec.codim - img->codim << " on record " << rec.id
               << "\n";
      }
    }
    // Degrees drop strictly along edges, so the graph cannot cycle;
    // walk it anyway so a broken file fails loudly.
    for (const auto& rec : records) {
      std::set<int> seen{rec.id};
      std::function<void(const DbRecord&)> walk = [&](const DbRecord& r) {
        for (const auto& c : r.centres)
          if (c.image_id) {
            if (!seen.insert(*c.image_id).second)
              throw ChecksumMismatch("verify: projection cycle through record " +
                                     std::to_string(*c.image_id));
            walk(*by_id(*c.image_id));
            seen.erase(*c.image_id);
          }
      };
      walk(rec);
    }
    return unresolved;
  }

  std::map<int, int> codim_histogram() const {
    std::map<int, int> h;
    for (const auto& r : records) ++h[r.codim];
    return h;
  }

  static std::string weights_str(const std::vector<int>& w) {
    std::string s;
    for (int x : w) {
      if (!s.empty()) s += ",";
      s += std::to_string(x);
    }
    return s;
  }

  static std::string record_line(const DbRecord& r) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["kind"] = kind_str(r.kind);
    j["codim"] = r.codim;
    j["genus"] = r.genus;
    j["weights"] = r.weights;
    auto basket = nlohmann::ordered_json::array();
    for (const auto& s : r.basket) basket.push_back({s.r, s.a});
    j["basket"] = std::move(basket);
    auto num = nlohmann::ordered_json::array();
    for (int e = 0; e <= r.numerator.degree(); ++e)
      if (!r.numerator.coeff(e).is_zero())
        num.push_back({e, static_cast<long long>(r.numerator.coeff(e).as_int())});
    j["numerator"] = std::move(num);
    j["degree"] = r.degree.str_pq();
    auto centres = nlohmann::ordered_json::array();
    for (const auto& c : r.centres) {
      nlohmann::ordered_json jc;
      jc["sing"] = {c.sing.r, c.sing.a};
      jc["type"] = c.type_i ? 1 : 0;
      if (c.image_id)
        jc["image"] = *c.image_id;
      else
        jc["image"] = nullptr;
      centres.push_back(std::move(jc));
    }
    j["centres"] = std::move(centres);
    return j.dump();
  }

 private:
  static bool contains_multiset(const std::vector<int>& sorted_haystack, std::vector<int> needle) {
    std::sort(needle.begin(), needle.end());
    size_t i = 0;
    for (int v : needle) {
      while (i < sorted_haystack.size() && sorted_haystack[i] < v) ++i;
      if (i == sorted_haystack.size() || sorted_haystack[i] != v) return false;
      ++i;
    }
    return true;
  }

  static std::vector<CandidateRecord> scan_basket(Kind kind, int max_codim, const BasketGenus& bg,
                                                  const Overrides& overrides,
                                                  std::vector<std::string>& notes) {
    std::vector<CandidateRecord> out;
    const int cap = bg.min_genus + 80;
    for (int g = bg.min_genus;; ++g) {
      if (g > cap)
        throw std::logic_error("genus scan did not stop for basket " + basket_str(bg.basket));
      // Cut off on the unminimised multiset: minimisation can only
      // shrink it, so its codimension bounds the record's from above
      // and, unlike the final codimension, grows steadily with genus.
      std::vector<int> raw;
      try {
        raw = deduce_weights_raw(kind, g, bg.basket, overrides);
      } catch (const NoCandidate& e) {
        notes.push_back("no raw weights: basket " + basket_str(bg.basket) + " genus " +
                        std::to_string(g) + ": " + e.what());
        continue;
      }
      if (codim_of(kind, raw.size()) > max_codim) {
        for (int k = 1; k <= 3; ++k) {
          try {
            auto probe = deduce_weights_raw(kind, g + k, bg.basket, overrides);
            if (codim_of(kind, probe.size()) <= max_codim)
              notes.push_back("window violation: basket " + basket_str(bg.basket) + " genus " +
                              std::to_string(g + k) + " raw codim " +
                              std::to_string(codim_of(kind, probe.size())));
          } catch (const NoCandidate& e) {
            notes.push_back("window probe failed: basket " + basket_str(bg.basket) + " genus " +
                            std::to_string(g + k) + ": " + e.what());
          }
        }
        return out;
      }
      try {
        out.push_back(make_candidate(kind, g, bg.basket, overrides));
      } catch (const NoCandidate& e) {
        notes.push_back("no candidate: basket " + basket_str(bg.basket) + " genus " +
                        std::to_string(g) + ": " + e.what());
      }
    }
  }

  // Structure theory certifies candidates up to codimension 3; a
  // record of higher codimension earns its place by projecting onto
  // smaller records.  Working up through the codimensions, a record is
  // kept when it has no projection-shaped centre at all, when some
  // centre's image datum matches an already kept record exactly, or
  // when the overrides table vouches for its data.  Everything of
  // codimension at most 3 is kept, so the lookups are stable.
  void apply_projection_filter(const Overrides& overrides, std::ostream* log) {
    if (max_codim < 4) return;
    using Key = std::tuple<int, std::string, std::vector<int>>;
    std::set<Key> kept;
    for (const auto& r : records)
      if (r.codim < 4) kept.insert({r.genus, basket_str(r.basket), r.weights});
    std::vector<char> keep(records.size(), 1);
    for (int c = 4; c <= max_codim; ++c) {
      for (size_t i = 0; i < records.size(); ++i) {
        const DbRecord& r = records[i];
        if (r.codim != c) continue;
        if (overrides.find(r.genus, r.basket)) continue;  // curated data stay
        bool shaped = false, lands = false;
        for (const auto& centre : find_centres(r)) {
          if (!centre.type_i) continue;
          shaped = true;
          auto [basket, weights] = type1_image_data(r, centre.sing);
          if (kept.count({r.genus, basket_str(basket), weights})) {
            lands = true;
            break;
          }
        }
        if (shaped && !lands) {
          keep[i] = 0;
          if (log)
            *log << "discarded: genus " << r.genus << " basket {" << basket_str(r.basket)
                 << "} weights [" << weights_str(r.weights) << "]: codim " << c
                 << " with no projection image among the kept records\n";
        }
      }
      for (size_t i = 0; i < records.size(); ++i)
        if (keep[i] && records[i].codim == c)
          kept.insert({records[i].genus, basket_str(records[i].basket), records[i].weights});
    }
    size_t n = 0;
    for (size_t i = 0; i < records.size(); ++i)
      if (keep[i]) {
        if (n != i) records[n] = std::move(records[i]);
        ++n;
      }
    records.resize(n);
  }

  void sort_and_number() {
    std::sort(records.begin(), records.end(), [](const DbRecord& x, const DbRecord& y) {
      if (x.codim != y.codim) return x.codim < y.codim;
      int sx = 0, sy = 0;
      for (int w : x.weights) sx += w;
      for (int w : y.weights) sy += w;
      if (sx != sy) return sx < sy;
      if (x.weights != y.weights) return x.weights < y.weights;
      if (!(x.basket == y.basket))
        return std::lexicographical_compare(x.basket.begin(), x.basket.end(), y.basket.begin(),
                                            y.basket.end());
      return x.genus < y.genus;
    });
    for (size_t i = 0; i < records.size(); ++i) records[i].id = static_cast<int>(i) + 1;
    assign_names();
  }

  void assign_names() {
    std::map<int, int> counter;
    for (auto& r : records) {
      int k = ++counter[r.codim];
      static const char* kSeries[] = {"", "Reid1", "Fletcher2", "Altinok3", "Altinok4"};
      std::string prefix = r.codim >= 1 && r.codim <= 4 ? kSeries[r.codim]
                                                        : "C" + std::to_string(r.codim);
      r.name = prefix + "(" + std::to_string(k) + ")";
    }
  }

  static DbRecord parse_record(const std::string& line) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw IoError(std::string("load: bad record line: ") + e.what());
    }
    DbRecord r;
    try {
      r.id = j.at("id").get<int>();
      r.kind = kind_parse(j.at("kind").get<std::string>());
      r.codim = j.at("codim").get<int>();
      r.genus = j.at("genus").get<int>();
      r.weights = j.at("weights").get<std::vector<int>>();
      Basket b;
      for (const auto& e : j.at("basket")) b.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
      r.basket = make_basket(std::move(b));
      Poly num;
      for (const auto& term : j.at("numerator"))
        num.set_coeff(term.at(0).get<int>(), Rational(term.at(1).get<long long>()));
      r.numerator = std::move(num);
      r.degree = Rational::parse(j.at("degree").get<std::string>());
      for (const auto& jc : j.at("centres")) {
        Centre c;
        c.sing = QuotientSingularity(jc.at("sing").at(0).get<int>(), jc.at("sing").at(1).get<int>());
        c.type_i = jc.at("type").get<int>() == 1;
        if (!jc.at("image").is_null()) c.image_id = jc.at("image").get<int>();
        r.centres.push_back(c);
      }
    } catch (const nlohmann::json::exception& e) {
      throw IoError(std::string("load: bad record field: ") + e.what());
    }
    return r;
  }

  // Full re-derivation of every record from (kind, genus, basket).
  void validate_records() const {
    std::set<std::pair<int, std::string>> seen;
    for (const auto& rec : records) {
      std::string where = "record " + std::to_string(rec.id);
      if (!seen.insert({rec.genus, basket_str(rec.basket)}).second)
        throw ChecksumMismatch("validate: duplicate (genus, basket) at " + where);
      if (rec.kind != kind) throw ChecksumMismatch("validate: kind mismatch at " + where);
      if (rec.codim != codim_of(rec.kind, rec.weights.size()))
        throw ChecksumMismatch("validate: codim mismatch at " + where);
      if (rec.codim < 1 || rec.codim > max_codim)
        throw ChecksumMismatch("validate: codim out of range at " + where);
      if (!std::is_sorted(rec.weights.begin(), rec.weights.end()) || rec.weights.empty() ||
          rec.weights.front() < 1)
        throw ChecksumMismatch("validate: bad weights at " + where);
      if (rec.degree != degree(rec.kind, rec.genus, rec.basket))
        throw ChecksumMismatch("validate: degree mismatch at " + where);
      if (!(rec.degree > Rational(0)))
        throw ChecksumMismatch("validate: non-positive degree at " + where);
      HilbertSeries p = hilbert_series(rec.kind, rec.genus, rec.basket);
      auto v = detail::validate_weights(rec.kind, p, rec.basket, rec.weights);
      if (!v) throw ChecksumMismatch("validate: weights fail validation at " + where);
      if (!(v->numerator == rec.numerator))
        throw ChecksumMismatch("validate: numerator mismatch at " + where);
    }
  }
};

}  // namespace k3db
