// formspec command line: minima, families, sweeps and the constructive searches.
//
// exit codes: 0 ok, 2 usage / malformed input, 3 math precondition,
// 4 budget exhausted, 5 cache I/O or stale cache entry.

#include "formspec/cf.hpp"
#include "formspec/dioph.hpp"
#include "formspec/spectrum.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace formspec;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.3.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CacheError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --------------------------------------------------------------- config

struct RunConfig {
  long box = 100;
  long depth = 30;
  std::string eta;      // empty: per-operation default
  long precision = 20;  // decimal digits in renderings
  std::uint64_t seed = 7;
  std::string cache;
  std::string format = "json";
  unsigned threads = 0;
};

// defaults, then the FORMSPEC_CONFIG file; flags are applied afterwards
RunConfig base_config() {
  RunConfig c;
  const char* path = std::getenv("FORMSPEC_CONFIG");
  if (path && *path) {
    std::ifstream in(path);
    if (!in) throw UsageError(std::string("cannot read config ") + path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw UsageError(std::string("config ") + path + ": " + e.what());
    }
    try {
      if (j.contains("box")) c.box = j["box"].get<long>();
      if (j.contains("depth")) c.depth = j["depth"].get<long>();
      if (j.contains("eta")) c.eta = j["eta"].is_string() ? j["eta"].get<std::string>() : j["eta"].dump();
      if (j.contains("precision")) c.precision = j["precision"].get<long>();
      if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
      if (j.contains("cache")) c.cache = j["cache"].get<std::string>();
      if (j.contains("format")) c.format = j["format"].get<std::string>();
      if (j.contains("threads")) c.threads = j["threads"].get<unsigned>();
    } catch (const json::exception& e) {
      throw UsageError(std::string("config ") + path + ": " + e.what());
    }
  }
  if (const char* cp = std::getenv("FORMSPEC_CACHE"); cp && *cp) c.cache = cp;
  return c;
}

void check_config(const RunConfig& c) {
  if (c.box < 1 || c.depth < 0 || c.precision < 1) throw UsageError("box, depth and precision must be positive");
  if (c.format != "json" && c.format != "csv" && c.format != "text")
    throw UsageError("format must be json, csv or text");
}

// --------------------------------------------------------------- parsing

Rational arg_rational(const std::string& s, const char* what) {
  try {
    return parse_rational(s);
  } catch (const std::exception&) {
    throw UsageError(std::string("malformed ") + what + " '" + s + "'");
  }
}

BinaryForm arg_form(const std::string& s) {
  try {
    return BinaryForm::parse(s);
  } catch (const std::exception& e) {
    throw UsageError(std::string("malformed form: ") + e.what());
  }
}

// --------------------------------------------------------------- rendering

json enclosure(const RatInterval& iv, long digits) {
  json j;
  j["lo"] = to_string(iv.lo);
  j["hi"] = to_string(iv.hi);
  j["decimal"] = to_decimal(iv.mid(), static_cast<int>(digits));
  return j;
}

json real_value(const Real& v, const RatInterval& iv, long digits) {
  json j;
  if (auto q = v.exact_rational()) j["exact"] = to_string(*q);
  json e = enclosure(iv, digits);
  for (auto& [k, x] : e.items()) j[k] = x;
  return j;
}

json point(const std::optional<Point>& p) {
  if (!p) return nullptr;
  return json::array({p->first.get_str(), p->second.get_str()});
}

json min_json(const MinResult& m, long digits) {
  json j;
  j["value"] = real_value(m.value, m.enclosure, digits);
  j["attaining"] = point(m.attaining);
  j["certified"] = m.certified;
  j["certificate"] = m.certificate_note;
  j["box"] = m.box_bound;
  j["depth"] = m.cf_depth;
  return j;
}

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_object() && v.contains("decimal")) return v["decimal"].get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : " ") + scalar_text(x);
    return "(" + s + ")";
  }
  return v.dump();
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  for (auto& [k, v] : j.items()) {
    if (k == "rows" && prefix.empty()) continue;
    std::string key = prefix.empty() ? k : prefix + "." + k;
    if (v.is_object())
      flatten(v, key, out);
    else
      out.emplace_back(key, scalar_text(v));
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

// Results are objects; list-like output goes in "rows" (flat objects with a
// shared key order), which csv renders on its own.
std::string render(const json& j, const std::string& format) {
  if (format == "json") return j.dump(2) + "\n";
  std::ostringstream os;
  const json* rows = j.contains("rows") ? &j["rows"] : nullptr;
  if (format == "csv") {
    if (rows && !rows->empty()) {
      std::string head;
      for (auto& [k, v] : rows->front().items()) head += (head.empty() ? "" : ",") + k;
      os << head << "\n";
      for (const auto& r : *rows) {
        std::string line;
        bool first = true;
        for (auto& [k, v] : r.items()) {
          line += (first ? "" : ",") + csv_field(scalar_text(v));
          first = false;
        }
        os << line << "\n";
      }
      return os.str();
    }
    std::vector<std::pair<std::string, std::string>> kv;
    flatten(j, "", kv);
    os << "field,value\n";
    for (auto& [k, v] : kv) os << csv_field(k) << "," << csv_field(v) << "\n";
    return os.str();
  }
  std::vector<std::pair<std::string, std::string>> kv;
  flatten(j, "", kv);
  for (auto& [k, v] : kv) os << k << ": " << v << "\n";
  if (rows)
    for (const auto& r : *rows) {
      std::string line;
      for (auto& [k, v] : r.items()) line += (line.empty() ? "" : "  ") + k + "=" + scalar_text(v);
      os << line << "\n";
    }
  return os.str();
}

// --------------------------------------------------------------- cache

struct CacheKey {
  std::string form_key, operation, params_digest;
};

class Cache {
 public:
  explicit Cache(std::string path) : path_(std::move(path)) {}
  bool enabled() const { return !path_.empty(); }

  std::optional<std::string> lookup(const CacheKey& k) const {
    if (!enabled()) return std::nullopt;
    int fd = ::open(path_.c_str(), O_RDONLY);
    if (fd < 0) {
      if (errno == ENOENT) return std::nullopt;
      throw CacheError("cannot open cache " + path_);
    }
    ::flock(fd, LOCK_SH);
    std::string data;
    char buf[1 << 16];
    for (ssize_t r; (r = ::read(fd, buf, sizeof buf)) > 0;) data.append(buf, static_cast<std::size_t>(r));
    ::flock(fd, LOCK_UN);
    ::close(fd);
    std::istringstream in(data);
    std::string line;
    long no = 0;
    while (std::getline(in, line)) {
      ++no;
      if (line.empty()) continue;
      json e;
      try {
        e = json::parse(line);
      } catch (const json::exception&) {
        throw CacheError("cache " + path_ + ": malformed entry on line " + std::to_string(no));
      }
      if (e.value("form_key", "") == k.form_key && e.value("operation", "") == k.operation &&
          e.value("params_digest", "") == k.params_digest && e.value("tool_version", "") == kVersion)
        return e.value("result", "");
    }
    return std::nullopt;
  }

  void store(const CacheKey& k, const std::string& result) const {
    if (!enabled()) return;
    int fd = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd < 0) throw CacheError("cannot write cache " + path_);
    ::flock(fd, LOCK_EX);
    json e;
    e["form_key"] = k.form_key;
    e["operation"] = k.operation;
    e["params_digest"] = k.params_digest;
    e["result"] = result;
    std::time_t now = std::time(nullptr);
    char ts[32];
    std::strftime(ts, sizeof ts, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    e["created_at"] = ts;
    e["tool_version"] = kVersion;
    std::string line = e.dump() + "\n";
    bool ok = ::write(fd, line.data(), line.size()) == static_cast<ssize_t>(line.size());
    ::flock(fd, LOCK_UN);
    ::close(fd);
    if (!ok) throw CacheError("short write to cache " + path_);
  }

 private:
  std::string path_;
};

// --------------------------------------------------------------- commands

struct Ctx {
  RunConfig cfg;
  bool no_cache = false;
  std::string out;
};

std::string digest(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::string s;
  for (const auto& [k, v] : kv) s += (s.empty() ? "" : ";") + k + "=" + v;
  return s;
}

// Cached run: a hit is emitted as stored; --no-cache recomputes and checks
// the stored entry still matches.
int run_cached(const Ctx& ctx, CacheKey key, const std::function<json()>& compute) {
  key.params_digest += ";format=" + ctx.cfg.format + ";precision=" + std::to_string(ctx.cfg.precision);
  Cache cache(ctx.cfg.cache);
  std::optional<std::string> hit = cache.lookup(key);
  std::string text;
  if (hit && !ctx.no_cache) {
    text = *hit;
  } else {
    text = render(compute(), ctx.cfg.format);
    if (hit && *hit != text) throw CacheError("stale cache entry for " + key.operation + " " + key.form_key);
    if (!hit) cache.store(key, text);
  }
  if (ctx.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream o(ctx.out);
    if (!o) throw UsageError("cannot write " + ctx.out);
    o << text;
  }
  return 0;
}

MinOptions min_options(const RunConfig& c) {
  MinOptions o;
  o.box = c.box;
  o.depth = c.depth;
  if (!c.eta.empty()) o.eta = arg_rational(c.eta, "eta");
  o.threads = c.threads;
  return o;
}

json disc_json(const Real& d, long digits) {
  RatInterval e = enclose_relative(d, 96);  // of |d|
  if (d.sign() < 0) e = -e;
  return real_value(d, e, digits);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice minima of binary forms and spectrum constructions"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  auto ctx = std::make_shared<Ctx>();
  std::string format, cache_path;
  long box = 0, depth = -1, precision = 0;
  std::string eta;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  auto* o_format = app.add_option("--format", format, "json, csv or text");
  auto* o_box = app.add_option("--box", box, "box bound T");
  auto* o_depth = app.add_option("--depth", depth, "convergent depth");
  auto* o_eta = app.add_option("--eta", eta, "digit-cut exponent (rational)");
  auto* o_prec = app.add_option("--precision", precision, "decimal digits in output");
  auto* o_seed = app.add_option("--seed", seed, "sampling seed");
  auto* o_cache = app.add_option("--cache", cache_path, "cache file (default $FORMSPEC_CACHE)");
  auto* o_threads = app.add_option("--threads", threads, "worker threads (0 = all cores)");
  app.add_flag("--no-cache", ctx->no_cache, "recompute, checking any cached entry");
  app.add_option("--out", ctx->out, "write to a file instead of stdout");

  std::function<int()> action;

  // min
  auto* c_min = app.add_subcommand("min", "minimum of |f| over nonzero integer vectors");
  std::string min_form;
  bool brute = false;
  c_min->add_option("form", min_form, "form text, e.g. \"3: 1 0 -1 -1\"")->required();
  c_min->add_flag("--brute", brute, "plain box scan instead of the reduced search");
  c_min->callback([&] {
    action = [&] {
      BinaryForm f = arg_form(min_form);
      const RunConfig& c = ctx->cfg;
      MinOptions o = min_options(c);
      CacheKey key{f.to_text(), brute ? "min-brute" : "min",
                   digest({{"box", std::to_string(o.box)}, {"depth", std::to_string(o.depth)}, {"eta", c.eta}})};
      return run_cached(*ctx, key, [&] {
        MinResult m = brute ? brute_force_min(f, o.box, o.threads) : m_estimate(f, o);
        json j;
        j["form"] = f.to_text();
        j["discriminant"] = to_string(discriminant(f));
        json mj = min_json(m, c.precision);
        for (auto& [k, v] : mj.items()) j[k] = v;
        return j;
      });
    };
  });

  // family
  auto* c_fam = app.add_subcommand("family", "neg-disc (P_t) or pos-disc (rho(c, N)) family member");
  std::string kind, s_t = "0", s_c = "1";
  long famN = 20;
  c_fam->add_option("kind", kind, "neg-disc or pos-disc")->required();
  c_fam->add_option("--t", s_t, "neg-disc parameter t >= 0");
  c_fam->add_option("--c", s_c, "pos-disc parameter c >= 1");
  c_fam->add_option("--N", famN, "pos-disc index N >= 2");
  c_fam->callback([&] {
    action = [&] {
      const RunConfig& c = ctx->cfg;
      if (kind != "neg-disc" && kind != "pos-disc") throw UsageError("family kind must be neg-disc or pos-disc");
      bool neg = kind == "neg-disc";
      Rational t = arg_rational(s_t, "t"), cc = arg_rational(s_c, "c");
      if (neg && t < 0) throw UsageError("neg-disc needs t >= 0");
      if (!neg && (cc < 1 || famN < 2)) throw UsageError("pos-disc needs c >= 1 and N >= 2");
      MinOptions o = min_options(c);
      std::string fk = neg ? "neg-disc t=" + to_string(t) : "pos-disc c=" + to_string(cc) + " N=" + std::to_string(famN);
      CacheKey key{fk, "family", digest({{"box", std::to_string(o.box)}, {"depth", std::to_string(o.depth)}})};
      return run_cached(*ctx, key, [&] {
        std::optional<PosDiscFamily> pd;
        RealForm f = neg ? neg_disc_family(t) : (pd = pos_disc_family(cc, famN))->form;
        MinResult m = m_estimate(f, o);
        Real D = f.discriminant();
        RatInterval De = enclose_relative(D, 96);
        json j;
        j["kind"] = kind;
        if (neg) {
          j["t"] = to_string(t);
          j["form"] = f.to_string();
          j["factors"] = "(x - r y)((x + r/2 y)^2 + (3/4 r^2 - 1)(1 + t^2) y^2), r^3 = r + 1";
        } else {
          j["c"] = to_string(cc);
          j["N"] = famN;
          j["form"] = f.to_string();
          j["root"] = pd->root.to_string();
          j["digit"] = pd->digit.get_str();
        }
        j["discriminant"] = disc_json(D, c.precision);
        j["minimum"] = min_json(m, c.precision);
        j["normalized_minimum"] = enclosure(normalized_minimum(De, f.degree(), m.enclosure, 64), c.precision);
        return j;
      });
    };
  });

  // sweep
  auto* c_sw = app.add_subcommand("sweep", "diagonal sweep over I_N with case classification");
  std::string sw_form = "3: 1 1 -2 -1";
  long swN = 15, samples = 200;
  c_sw->add_option("--form", sw_form, "form text");
  c_sw->add_option("--N", swN, "convergent index");
  c_sw->add_option("--samples", samples, "theta samples");
  c_sw->callback([&] {
    action = [&] {
      const RunConfig& c = ctx->cfg;
      SweepConfig sc;
      sc.form = arg_form(sw_form);
      sc.N = swN;
      sc.theta_samples = samples;
      sc.depth = c.depth;
      sc.box = c.box;
      sc.seed = c.seed;
      sc.threads = c.threads;
      if (swN < 2 || samples < 1) throw UsageError("sweep needs N >= 2 and samples >= 1");
      CacheKey key{sc.form.to_text(), "sweep",
                   digest({{"N", std::to_string(swN)}, {"samples", std::to_string(samples)},
                           {"seed", std::to_string(sc.seed)}, {"box", std::to_string(sc.box)},
                           {"depth", std::to_string(sc.depth)}})};
      return run_cached(*ctx, key, [&] {
        SweepResult R = sweep(sc);
        const SweepSummary& S = R.summary;
        long d = c.precision;
        json j;
        j["form"] = sc.form.to_text();
        j["N"] = swN;
        j["P_N"] = S.interval.P.get_str();
        j["Q_N"] = S.interval.Q.get_str();
        j["theta_N"] = enclosure(S.interval.theta_N, d + 20);
        j["right_end"] = enclosure(S.interval.right_end, d + 20);
        j["m_target"] = to_string(S.interval.target);
        j["samples"] = S.samples;
        j["case1_fraction"] = S.case1_fraction;
        json counts;
        for (int i = 0; i < 5; ++i) counts[to_string(static_cast<SweepCase>(i))] = S.counts[i];
        j["counts"] = counts;
        j["max_gap"] = to_decimal(S.max_gap, static_cast<int>(d));
        j["max_gap_with_ends"] = to_decimal(S.max_gap_with_ends, static_cast<int>(d));
        j["covered_measure"] = to_decimal(S.covered, static_cast<int>(d));
        j["M_hat"] = S.M_hat;
        json rows = json::array();
        for (const auto& p : R.points) {
          json r;
          r["theta_lo"] = to_decimal(p.theta, static_cast<int>(d + 20));
          r["theta_hi"] = to_decimal(p.theta, static_cast<int>(d + 20));
          r["value_lo"] = to_decimal(p.spec_value.lo, static_cast<int>(d));
          r["value_hi"] = to_decimal(p.spec_value.hi, static_cast<int>(d));
          r["case"] = to_string(p.kind);
          r["x"] = p.min_result.attaining ? p.min_result.attaining->first.get_str() : "";
          r["y"] = p.min_result.attaining ? p.min_result.attaining->second.get_str() : "";
          rows.push_back(r);
        }
        j["rows"] = rows;
        return j;
      });
    };
  });

  // ael
  auto* c_ael = app.add_subcommand("ael", "search for an almost-extremal witness x -> x + s");
  std::string ael_form = "3: 1 1 -2 -1", s_eps = "1/4";
  long budget = 10000;
  std::string s_height = "10000";
  c_ael->add_option("--form", ael_form, "form text");
  c_ael->add_option("--eps", s_eps, "epsilon");
  c_ael->add_option("--budget", budget, "iteration budget");
  c_ael->add_option("--height", s_height, "E^eta height H");
  c_ael->callback([&] {
    action = [&] {
      const RunConfig& c = ctx->cfg;
      BinaryForm f = arg_form(ael_form);
      DiophParams p;
      p.epsilon = arg_rational(s_eps, "eps");
      if (!c.eta.empty()) p.eta = arg_rational(c.eta, "eta");
      p.height = Integer(arg_rational(s_height, "height"));
      p.depth = c.depth;
      try {
        p.validate();
      } catch (const PreconditionError& e) {
        throw UsageError(e.what());
      }
      if (budget < 1) throw UsageError("budget must be positive");
      CacheKey key{f.to_text(), "ael",
                   digest({{"eps", to_string(p.epsilon)}, {"eta", to_string(p.eta)}, {"height", p.height.get_str()},
                           {"depth", std::to_string(p.depth)}, {"seed", std::to_string(c.seed)},
                           {"budget", std::to_string(budget)}})};
      return run_cached(*ctx, key, [&] {
        AelWitness w = ael_search(f, p.epsilon, p, c.seed, budget);
        json j;
        j["form"] = f.to_text();
        j["epsilon"] = to_string(w.epsilon);
        j["shift"] = to_string(w.shift);
        j["transform"] = "[[1, " + to_string(w.shift) + "], [0, 1]]";
        j["iterations"] = w.iterations;
        j["minimum"] = min_json(w.minimum, c.precision);
        json lows = json::array();
        for (const auto& b : w.per_root_lower_bounds) lows.push_back(enclosure(b, c.precision));
        j["root_minima"] = lows;
        json trace = json::array();
        for (const auto& t : w.interval_trace) {
          json e;
          e["interval"] = enclosure(t.interval, c.precision);
          e["kind"] = t.kind == ClassifiedInterval::Kind::TypeI ? "TypeI" : "TypeII";
          e["density"] = to_decimal(t.density_estimate, 4);
          trace.push_back(e);
        }
        j["trace"] = trace;
        return j;
      });
    };
  });

  // sigma
  auto* c_sig = app.add_subcommand("sigma", "transform fixing rho_1 with a prescribed cofactor value");
  std::string sig_form = "3: 1 1 -2 -1", s_theta, s_u, s_du = "0", s_guard = "1/10";
  long sigN = 12;
  c_sig->add_option("--form", sig_form, "form text");
  c_sig->add_option("--N", sigN, "convergent index");
  c_sig->add_option("--theta", s_theta, "theta (default: middle of I_N)");
  c_sig->add_option("--u", s_u, "target value");
  c_sig->add_option("--du", s_du, "target as an offset from the identity value");
  c_sig->add_option("--guard", s_guard, "allowed distance of u from the center value");
  c_sig->callback([&] {
    action = [&] {
      const RunConfig& c = ctx->cfg;
      BinaryForm f = arg_form(sig_form);
      if (sigN < 1) throw UsageError("N must be positive");
      std::optional<Rational> th;
      if (!s_theta.empty()) th = arg_rational(s_theta, "theta");
      std::optional<Rational> u;
      if (!s_u.empty()) u = arg_rational(s_u, "u");
      Rational du = arg_rational(s_du, "du"), guard = arg_rational(s_guard, "guard");
      CacheKey key{f.to_text(), "sigma",
                   digest({{"N", std::to_string(sigN)}, {"theta", s_theta}, {"u", s_u}, {"du", to_string(du)},
                           {"guard", to_string(guard)}})};
      return run_cached(*ctx, key, [&] {
        Rational theta;
        if (th) {
          theta = *th;
        } else {
          DiagonalInterval D = diagonal_interval(f, sigN);
          theta = round_down((D.theta_N.mid() + D.right_end.mid()) / 2, 200);
        }
        Real target = u ? Real(*u) : sigma_center(f, sigN, theta) + Real(du);
        SigmaResult s = sigma_solve(f, sigN, theta, target, guard);
        json j;
        j["form"] = f.to_text();
        j["N"] = sigN;
        j["theta"] = to_string(theta);
        j["identity"] = s.identity;
        j["lambda"] = to_string(s.lambda);
        j["mu"] = to_string(s.mu);
        json T = json::array();
        for (const Real* e : {&s.transform.a(), &s.transform.b(), &s.transform.c(), &s.transform.d()})
          T.push_back(to_decimal(e->enclose(128).mid(), static_cast<int>(c.precision)));
        j["transform"] = T;
        j["residual"] = enclosure(s.residual, c.precision);
        j["distance_to_identity"] = enclosure(s.distance, c.precision);
        return j;
      });
    };
  });

  // markoff
  auto* c_mk = app.add_subcommand("markoff", "Markoff triples by the Vieta tree and their spectrum values");
  std::string s_bound = "100";
  c_mk->add_option("--bound", s_bound, "largest z");
  c_mk->callback([&] {
    action = [&] {
      const RunConfig& c = ctx->cfg;
      Rational b = arg_rational(s_bound, "bound");
      if (b < 1 || b.get_den() != 1) throw UsageError("bound must be a positive integer");
      Integer bound(b);
      CacheKey key{"-", "markoff", digest({{"bound", bound.get_str()}})};
      return run_cached(*ctx, key, [&] {
        auto ts = markoff_triples(bound);
        FreimanConstant fc = freiman_constant();
        json j;
        j["bound"] = bound.get_str();
        j["count"] = ts.size();
        j["freiman"] = enclosure(fc.enclosure, c.precision);
        json rows = json::array();
        for (const auto& e : ts) {
          json r;
          r["x"] = e.triple.x.get_str();
          r["y"] = e.triple.y.get_str();
          r["z"] = e.triple.z.get_str();
          r["value"] = e.triple.z.get_str() + "/sqrt(" + Integer(9 * e.triple.z * e.triple.z - 4).get_str() + ")";
          r["decimal"] = to_decimal(e.enclosure.mid(), static_cast<int>(c.precision));
          rows.push_back(r);
        }
        j["rows"] = rows;
        return j;
      });
    };
  });

  // cf
  auto* c_cf = app.add_subcommand("cf", "continued fraction of a rational or a real algebraic number");
  std::string s_poly, s_near, s_value;
  c_cf->add_option("--poly", s_poly, "coefficients, highest degree first, e.g. \"1 0 -2\"");
  c_cf->add_option("--root-near", s_near, "pick the real root closest to this");
  c_cf->add_option("--value", s_value, "a rational instead of a root");
  c_cf->callback([&] {
    action = [&] {
      const RunConfig& c = ctx->cfg;
      if (s_poly.empty() == s_value.empty()) throw UsageError("give exactly one of --poly and --value");
      std::string fk;
      Real x(0L);
      if (!s_value.empty()) {
        Rational v = arg_rational(s_value, "value");
        fk = "value " + to_string(v);
        x = Real(v);
      } else {
        std::vector<Integer> co;
        std::istringstream in(s_poly);
        for (std::string tok; in >> tok;) {
          Rational q = arg_rational(tok, "coefficient");
          if (q.get_den() != 1) throw UsageError("polynomial coefficients must be integers");
          co.push_back(Integer(q));
        }
        if (co.size() < 2) throw UsageError("polynomial needs degree >= 1");
        std::reverse(co.begin(), co.end());
        IntPolynomial p(co);
        auto roots = isolate_real_roots(p);
        if (roots.empty()) throw PreconditionError("polynomial has no real root");
        Rational near = s_near.empty() ? Rational(0) : arg_rational(s_near, "root-near");
        std::size_t best = 0;
        Rational bd = -1;
        for (std::size_t i = 0; i < roots.size(); ++i) {
          Rational d = abs_of(roots[i].refine_bits(64).interval().mid() - near);
          if (bd < 0 || d < bd) bd = d, best = i;
        }
        fk = "poly " + s_poly + " root " + std::to_string(best);
        x = root_as_real(roots[best]);
      }
      CacheKey key{fk, "cf", digest({{"depth", std::to_string(c.depth)}})};
      return run_cached(*ctx, key, [&] {
        ExpandOptions opt;
        opt.allow_huge_digits = true;
        CFExpansion cf = expand(x, c.depth, opt);
        long upto = std::min(c.depth, cf.last_index().value_or(c.depth));
        json j;
        j["number"] = fk;
        j["decimal"] = to_decimal(x.enclose(200).mid(), static_cast<int>(c.precision));
        j["expansion"] = cf.to_string(upto);
        std::string tail = cf.tail() == CFExpansion::Tail::finite     ? "finite"
                           : cf.tail() == CFExpansion::Tail::periodic ? "periodic"
                                                                      : "lazy";
        j["tail"] = tail;
        json rows = json::array();
        for (const auto& cv : convergents(cf, upto)) {
          json r;
          r["index"] = cv.index;
          r["digit"] = cf.digit(cv.index).get_str();
          r["p"] = cv.p.get_str();
          r["q"] = cv.q.get_str();
          rows.push_back(r);
        }
        j["rows"] = rows;
        return j;
      });
    };
  });

  // profile
  auto* c_pr = app.add_subcommand("profile", "m along the diagonal path theta(t) = 1 + 4 (peak - 1) t (1 - t)");
  std::string pr_form = "3: 1 1 -2 -1", s_peak, s_through = "5/4";
  long pr_samples = 41;
  c_pr->add_option("--form", pr_form, "form text");
  c_pr->add_option("--peak", s_peak, "theta at t = 1/2");
  c_pr->add_option("--through", s_through, "choose the peak so theta rho_1 crosses this rational");
  c_pr->add_option("--samples", pr_samples, "samples in [0, 1]");
  c_pr->callback([&] {
    action = [&] {
      const RunConfig& c = ctx->cfg;
      BinaryForm f = arg_form(pr_form);
      if (pr_samples < 2) throw UsageError("profile needs at least two samples");
      std::optional<Rational> peak;
      if (!s_peak.empty()) peak = arg_rational(s_peak, "peak");
      Rational through = arg_rational(s_through, "through");
      CacheKey key{f.to_text(), "profile",
                   digest({{"peak", s_peak}, {"through", to_string(through)}, {"samples", std::to_string(pr_samples)},
                           {"box", std::to_string(c.box)}, {"depth", std::to_string(c.depth)}})};
      return run_cached(*ctx, key, [&] {
        if (!peak) {
          auto rp = real_roots(f);
          if (rp.real_roots.empty()) throw PreconditionError("form has no real root");
          Real r1 = root_as_real(rp.real_roots.front());
          Rational star = round_down((Real(through) / r1).enclose(64).mid(), 40);
          peak = 1 + 2 * (star - 1);
        }
        MinOptions o = min_options(c);
        auto P = path_profile(f, diagonal_path(*peak), pr_samples, o, 0.1, 1000, c.threads);
        json j;
        j["form"] = f.to_text();
        j["peak"] = to_string(*peak);
        Rational lowest = P.front().min.enclosure.hi;
        for (const auto& p : P) lowest = std::min(lowest, p.min.enclosure.hi);
        j["lowest"] = to_decimal(lowest, static_cast<int>(c.precision));
        json rows = json::array();
        for (const auto& p : P) {
          json r;
          r["t"] = to_string(p.t);
          r["value_lo"] = to_decimal(p.min.enclosure.lo, static_cast<int>(c.precision));
          r["value_hi"] = to_decimal(p.min.enclosure.hi, static_cast<int>(c.precision));
          r["x"] = p.min.attaining ? p.min.attaining->first.get_str() : "";
          r["y"] = p.min.attaining ? p.min.attaining->second.get_str() : "";
          r["nearest"] = p.nearest;
          r["rational"] = p.p.get_str() + "/" + p.q.get_str();
          r["near_rational"] = p.near_rational;
          rows.push_back(r);
        }
        j["rows"] = rows;
        return j;
      });
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    RunConfig& c = ctx->cfg;
    c = base_config();
    if (o_format->count()) c.format = format;
    if (o_box->count()) c.box = box;
    if (o_depth->count()) c.depth = depth;
    if (o_eta->count()) c.eta = eta;
    if (o_prec->count()) c.precision = precision;
    if (o_seed->count()) c.seed = seed;
    if (o_cache->count()) c.cache = cache_path;
    if (o_threads->count()) c.threads = threads;
    check_config(c);
    return action();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CacheError& e) {
    std::cerr << "cache error: " << e.what() << "\n";
    return 5;
  } catch (const BudgetError& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return 4;
  } catch (const PreconditionError& e) {
    std::cerr << "math error: " << e.what() << "\n";
    return 3;
  } catch (const UnresolvedError& e) {
    std::cerr << "math error: " << e.what() << "\n";
    return 3;
  } catch (const DigitGuardError& e) {
    std::cerr << "math error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
