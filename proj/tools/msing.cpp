// msing: batch interface to the mod-ell motivic Steenrod algebra engine.
//
// Commands:
//   verify   invariant suites (Hopf algebroid axioms, basis round-trips,
//            Adem relations) over a degree range
//   chart    Ext chart of a finitely presented A(n)-module (or the delayed
//            total-complex chart of a tower), emitted as JSON/SVG/text
//   singer   evaluate one Steenrod operation on an element of the small or
//            large Singer construction and print the normal form
//   resolve  minimal free resolution of a module over A(n)
//   lin      residue-map Ext-equivalence experiment with stabilization over
//            band width and envelope
//
// Exit codes: 0 success/ISO, 1 verification failure/FAIL, 2 INCONCLUSIVE,
// 3 usage error.  All outputs are deterministic; identical configurations
// produce byte-identical JSON.

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "msing/ext.hpp"
#include "msing/singer.hpp"

using json = nlohmann::ordered_json;
using namespace msing;

namespace {

// ---------------------------------------------------------------------------
// Shared option plumbing

struct Common {
  int prime = 2;
  std::string profile = "trivial";
  int envelope = 1;
  std::string window = "s=0..3,ts=0..6";
  std::string module = "trivial";
  long long max_deg = 12;
  std::string out;
  std::string format = "json";
  std::string save_config;
};

int thread_cap() {
  const char* v = std::getenv("MSING_THREADS");
  if (!v) return 1;
  int n = std::atoi(v);
  return n >= 1 ? n : 1;
}

Profile parse_profile(int prime, const std::string& s) {
  ProfileKind k;
  if (s == "trivial")
    k = ProfileKind::Trivial;
  else if (s == "complex")
    k = ProfileKind::Complex;
  else if (s == "real")
    k = ProfileKind::Real;
  else
    throw CLI::ValidationError("--profile", "unknown profile '" + s + "'");
  if (k != ProfileKind::Trivial && prime != 2)
    throw CLI::ValidationError("--profile",
                               "profile '" + s + "' requires --prime 2");
  Profile pr{prime, k};
  pr.validate();
  return pr;
}

// Window syntax: "s=0..3,ts=0..6" with an optional ",u=<lo>..<hi>" clause.
// The s-range and the stem (t - s) range define the region a chart or verdict
// covers; internally charts are computed on the rectangular hull in t.
struct WinSpec {
  int smin = 0, smax = 3;
  long long ts_lo = 0, ts_hi = 6;
  std::optional<std::pair<long long, long long>> u;
};

std::pair<long long, long long> parse_range(const std::string& s,
                                            const std::string& clause) {
  auto dots = s.find("..");
  if (dots == std::string::npos)
    throw CLI::ValidationError("--window", "bad range in '" + clause + "'");
  try {
    return {std::stoll(s.substr(0, dots)), std::stoll(s.substr(dots + 2))};
  } catch (...) {
    throw CLI::ValidationError("--window", "bad range in '" + clause + "'");
  }
}

WinSpec parse_window(const std::string& w) {
  WinSpec ws;
  bool saw_s = false, saw_ts = false;
  std::stringstream in(w);
  std::string clause;
  while (std::getline(in, clause, ',')) {
    auto eq = clause.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--window", "bad clause '" + clause + "'");
    std::string key = clause.substr(0, eq);
    auto [lo, hi] = parse_range(clause.substr(eq + 1), clause);
    if (key == "s") {
      ws.smin = static_cast<int>(lo);
      ws.smax = static_cast<int>(hi);
      saw_s = true;
    } else if (key == "ts") {
      ws.ts_lo = lo;
      ws.ts_hi = hi;
      saw_ts = true;
    } else if (key == "u") {
      ws.u = {lo, hi};
    } else {
      throw CLI::ValidationError("--window", "unknown axis '" + key + "'");
    }
  }
  if (!saw_s || !saw_ts)
    throw CLI::ValidationError("--window",
                               "window needs 's=..' and 'ts=..' clauses");
  if (ws.smin < 0 || ws.smax < ws.smin || ws.ts_hi < ws.ts_lo)
    throw CLI::ValidationError("--window", "empty window");
  return ws;
}

ExtWindow hull_of(const WinSpec& ws) {
  ExtWindow win;
  win.smax = ws.smax;
  win.tmin = ws.ts_lo;  // attained at s = 0
  win.tmax = ws.ts_hi + ws.smax;
  win.umax = ws.u ? ws.u->second : win.tmax;
  return win;
}

bool in_spec(const WinSpec& ws, int s, long long t, long long u) {
  if (s < ws.smin || s > ws.smax) return false;
  long long stem = t - s;
  if (stem < ws.ts_lo || stem > ws.ts_hi) return false;
  if (ws.u && (u < ws.u->first || u > ws.u->second)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Module descriptors
//
//   trivial                  H as a module over A(n)
//   lens:m=M,n=N             stunted lens module, slots -M .. N-M-1
//   bmu:KMIN..KMAX           localized band from the mu_ell classifying space
//   bsigma:KMIN..KMAX        localized band from the symmetric-group model
//   susp:P,Q:<desc>          bigraded suspension of another descriptor
//   tower:lens:m0=A,m1=B,n=N lens tower (chart --mode total-complex only)

std::map<std::string, long long> parse_kv(const std::string& s) {
  std::map<std::string, long long> out;
  std::stringstream in(s);
  std::string clause;
  while (std::getline(in, clause, ',')) {
    auto eq = clause.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--module", "bad clause '" + clause + "'");
    try {
      out[clause.substr(0, eq)] = std::stoll(clause.substr(eq + 1));
    } catch (...) {
      throw CLI::ValidationError("--module", "bad clause '" + clause + "'");
    }
  }
  return out;
}

FPModule parse_module(const Profile& pr, int env, const std::string& desc) {
  if (desc == "trivial") return trivial_module(pr, env);
  auto colon = desc.find(':');
  std::string head = desc.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : desc.substr(colon + 1);
  if (head == "lens") {
    auto kv = parse_kv(rest);
    if (!kv.count("m") || !kv.count("n"))
      throw CLI::ValidationError("--module", "lens needs m=..,n=..");
    return lens_module(pr, env, static_cast<int>(kv["m"]),
                       static_cast<int>(kv["n"]));
  }
  if (head == "bmu" || head == "bsigma") {
    auto [lo, hi] = parse_range(rest, desc);
    return head == "bmu" ? bmu_band(pr, env, static_cast<int>(lo),
                                    static_cast<int>(hi))
                         : bsigma_band(pr, env, static_cast<int>(lo),
                                       static_cast<int>(hi));
  }
  if (head == "susp") {
    auto colon2 = rest.find(':');
    if (colon2 == std::string::npos)
      throw CLI::ValidationError("--module", "susp needs susp:P,Q:<module>");
    std::string pq = rest.substr(0, colon2);
    auto comma = pq.find(',');
    if (comma == std::string::npos)
      throw CLI::ValidationError("--module", "susp needs susp:P,Q:<module>");
    int p0, q0;
    try {
      p0 = std::stoi(pq.substr(0, comma));
      q0 = std::stoi(pq.substr(comma + 1));
    } catch (...) {
      throw CLI::ValidationError("--module", "bad suspension bidegree");
    }
    return suspend(parse_module(pr, env, rest.substr(colon2 + 1)), p0, q0);
  }
  throw CLI::ValidationError("--module", "unknown descriptor '" + desc + "'");
}

Tower parse_tower(const Profile& pr, int env, const std::string& desc) {
  if (desc.rfind("tower:lens:", 0) != 0)
    throw CLI::ValidationError("--module",
                               "tower descriptor must be tower:lens:m0=..,m1=..,n=..");
  auto kv = parse_kv(desc.substr(11));
  if (!kv.count("m0") || !kv.count("m1") || !kv.count("n"))
    throw CLI::ValidationError("--module", "tower:lens needs m0=..,m1=..,n=..");
  return lens_tower(pr, env, static_cast<int>(kv["m0"]),
                    static_cast<int>(kv["m1"]), static_cast<int>(kv["n"]));
}

// ---------------------------------------------------------------------------
// Output helpers

std::string profile_name(const Profile& pr) {
  switch (pr.kind) {
    case ProfileKind::Trivial: return "trivial";
    case ProfileKind::Complex: return "complex";
    default: return "real";
  }
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot open output file " + out);
  f << text << "\n";
}

json chart_to_json(const ExtChart& ch, const Profile& pr, int env,
                   const WinSpec& ws) {
  json j;
  j["prime"] = pr.ell;
  j["profile"] = profile_name(pr);
  j["envelope"] = env;
  j["window"]["s"] = {ws.smin, ws.smax};
  j["window"]["ts"] = {ws.ts_lo, ws.ts_hi};
  if (ws.u) j["window"]["u"] = {ws.u->first, ws.u->second};
  j["entries"] = json::array();
  for (auto& [key, dim] : ch.entries) {
    auto [s, t, u] = key;
    if (!in_spec(ws, s, t, u)) continue;
    j["entries"].push_back({{"s", s}, {"t", t}, {"u", u}, {"dim", dim}});
  }
  return j;
}

// Static renderings: pure functions of the chart JSON.

std::string chart_to_txt(const json& j) {
  // dot counts per (stem, s), weights folded together
  std::map<std::pair<long long, int>, int> cell;
  for (auto& e : j.at("entries"))
    cell[{e.at("t").get<long long>() - e.at("s").get<long long>(),
          e.at("s").get<int>()}] += e.at("dim").get<int>();
  long long ts_lo = j.at("window").at("ts")[0], ts_hi = j.at("window").at("ts")[1];
  int s_lo = j.at("window").at("s")[0], s_hi = j.at("window").at("s")[1];
  std::ostringstream out;
  for (int s = s_hi; s >= s_lo; --s) {
    out << (s < 10 ? " " : "") << s << " |";
    for (long long ts = ts_lo; ts <= ts_hi; ++ts) {
      auto it = cell.find({ts, s});
      if (it == cell.end())
        out << "   .";
      else
        out << (it->second < 10 ? "   " : "  ") << it->second;
    }
    out << "\n";
  }
  out << "    ";
  for (long long ts = ts_lo; ts <= ts_hi; ++ts) out << "----";
  out << "\n  s/ts";
  for (long long ts = ts_lo; ts <= ts_hi; ++ts)
    out << (ts > -10 && ts < 10 ? "   " : "  ") << ts;
  return out.str();
}

std::string chart_to_svg(const json& j) {
  long long ts_lo = j.at("window").at("ts")[0], ts_hi = j.at("window").at("ts")[1];
  int s_lo = j.at("window").at("s")[0], s_hi = j.at("window").at("s")[1];
  const int cell = 28, margin = 40;
  long long w = margin * 2 + (ts_hi - ts_lo + 1) * cell;
  long long h = margin * 2 + (s_hi - s_lo + 1) * cell;
  std::map<std::pair<long long, int>, int> dots;
  for (auto& e : j.at("entries"))
    dots[{e.at("t").get<long long>() - e.at("s").get<long long>(),
          e.at("s").get<int>()}] += e.at("dim").get<int>();
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (long long ts = ts_lo; ts <= ts_hi; ++ts)
    out << "<text x=\"" << margin + (ts - ts_lo) * cell + cell / 2 << "\" y=\""
        << h - margin / 2 << "\" font-size=\"11\" text-anchor=\"middle\">" << ts
        << "</text>\n";
  for (int s = s_lo; s <= s_hi; ++s)
    out << "<text x=\"" << margin / 2 << "\" y=\""
        << h - margin - (s - s_lo) * cell - cell / 2 + 4
        << "\" font-size=\"11\" text-anchor=\"middle\">" << s << "</text>\n";
  for (auto& [key, d] : dots) {
    auto [ts, s] = key;
    long long cx = margin + (ts - ts_lo) * cell + cell / 2;
    long long cy = h - margin - (s - s_lo) * cell - cell / 2;
    out << "<circle cx=\"" << cx << "\" cy=\"" << cy
        << "\" r=\"4\" fill=\"black\"/>\n";
    if (d > 1)
      out << "<text x=\"" << cx + 6 << "\" y=\"" << cy - 6
          << "\" font-size=\"10\">" << d << "</text>\n";
  }
  out << "</svg>";
  return out.str();
}

void emit_chart(const json& j, const Common& C) {
  if (C.format == "json")
    emit(j.dump(2), C.out);
  else if (C.format == "txt")
    emit(chart_to_txt(j), C.out);
  else if (C.format == "svg")
    emit(chart_to_svg(j), C.out);
  else
    throw CLI::ValidationError("--format", "unknown format '" + C.format + "'");
}

std::string hpoly_str(const HPoly& h) {
  if (h.ts.empty()) return "0";
  std::string s;
  for (auto& [m, c] : h.ts) {
    if (!s.empty()) s += " + ";
    std::string term;
    if (c != 1 || (m.a == 0 && m.b == 0)) term = std::to_string(c);
    auto app = [&](const char* v, int e) {
      if (e == 0) return;
      if (!term.empty()) term += "*";
      term += v;
      if (e != 1) term += "^" + std::to_string(e);
    };
    app("r", m.a);
    app("T", m.b);
    s += term;
  }
  return s;
}

// ---------------------------------------------------------------------------
// verify: invariant suites

// Triple tensors in right-normal form, for the coassociativity check.
using Triple = std::map<std::tuple<Mono, Mono, Mono>, HPoly>;

void triple_add(const Profile& pr, Triple& t, const Mono& a, const Mono& b,
                const Mono& c, const HPoly& h) {
  if (h.zero()) return;
  HPoly& slot = t[{a, b, c}];
  slot.add(pr, h);
  if (slot.zero()) t.erase({a, b, c});
}

Triple psi_left(const Tensor& t) {  // (psi (x) 1)
  static const AlgTag F = AlgTag::full();
  Triple out;
  for (auto& [mm, h] : t.ts)
    for (auto& [ab, g] : psi_full_mono(t.pr, mm.first).ts) {
      DualElem gb(t.pr, F);
      gb.add(ab.second, g);
      for (auto& [b2, g2] : to_right_basis(gb))
        triple_add(t.pr, out, ab.first, b2, mm.second, hp_mul(t.pr, g2, h));
    }
  return out;
}

Triple psi_right(const Tensor& t) {  // (1 (x) psi)
  Triple out;
  for (auto& [mm, h] : t.ts) {
    Tensor p = tensor_scale_left(psi_full_mono(t.pr, mm.second), h);
    for (auto& [bc, k] : p.ts)
      triple_add(t.pr, out, mm.first, bc.first, bc.second, k);
  }
  return out;
}

DualElem counit_left(const Tensor& t) {
  DualElem out(t.pr, t.tagR);
  for (auto& [mm, h] : t.ts)
    if (mm.first.is_one()) out.add(mm.second, h);
  return out;
}

DualElem counit_right(const Tensor& t) {
  std::vector<std::pair<Mono, HPoly>> rb;
  for (auto& [mm, h] : t.ts)
    if (mm.second.is_one()) rb.push_back({mm.first, h});
  return from_right_basis(t.pr, t.tagL, rb);
}

DualElem mu_chi_left(const Tensor& t) {  // mult (chi (x) 1)
  DualElem out(t.pr, t.tagL);
  for (auto& [mm, h] : t.ts) {
    DualElem x = conjugate(DualElem::monomial(t.pr, t.tagL, mm.first));
    DualElem prod = mul(x, DualElem::monomial(t.pr, t.tagL, mm.second));
    DualElem scaled(t.pr, t.tagL);
    scaled.add_scaled(prod, h);
    out.add(scaled);
  }
  return out;
}

DualElem mu_chi_right(const Tensor& t) {  // mult (1 (x) chi)
  DualElem out(t.pr, t.tagL);
  for (auto& [mm, h] : t.ts) {
    DualElem x = conjugate(DualElem::monomial(t.pr, t.tagR, mm.second));
    out.add(mul(DualElem::monomial(t.pr, t.tagL, mm.first),
                mul(eta_right(t.pr, t.tagL, h), x)));
  }
  return out;
}

long long suite_hopf(const Profile& pr, long long D, bool& ok) {
  const AlgTag F = AlgTag::full();
  long long checks = 0;
  auto monos = monos_up_to_degree(pr, F, D);
  std::vector<DualElem> xs;
  std::vector<Tensor> ps;
  for (auto& m : monos) {
    DualElem x = DualElem::monomial(pr, F, m);
    Tensor p = coproduct(x);
    ok = ok && psi_left(p) == psi_right(p);
    ok = ok && counit_left(p) == x && counit_right(p) == x;
    ok = ok && conjugate(conjugate(x)) == x;
    DualElem el(pr, F);
    el.add(Mono{}, counit_poly(x));
    ok = ok && mu_chi_right(p) == el;
    ok = ok && mu_chi_left(p) == eta_right(pr, F, counit_poly(x));
    checks += 6;
    xs.push_back(std::move(x));
    ps.push_back(std::move(p));
  }
  // psi, counit, chi are algebra maps
  for (size_t i = 0; i < xs.size() && ok; ++i)
    for (size_t j = i; j < xs.size(); ++j) {
      long long d = mono_deg(monos[i], pr.ell) + mono_deg(monos[j], pr.ell);
      if (d > D) continue;
      DualElem prod = mul(xs[i], xs[j]);
      ok = ok && coproduct(prod) == tensor_mul(ps[i], ps[j]);
      HPoly ce = hp_mul(pr, counit_poly(xs[i]), counit_poly(xs[j]));
      HPoly cp = counit_poly(prod);
      HPoly diff = cp;
      diff.add(pr, ce, -1);
      ok = ok && diff.zero();
      ok = ok && conjugate(prod) == mul(conjugate(xs[j]), conjugate(xs[i]));
      checks += 3;
      if (!ok) break;
    }
  return checks;
}

long long suite_basis(const Profile& pr, long long D, bool& ok) {
  long long checks = 0;
  for (AlgTag tag : {AlgTag::full(), AlgTag::an(2), AlgTag::cn(2)}) {
    for (auto& m : monos_up_to_degree(pr, tag, D)) {
      DualElem x = DualElem::monomial(pr, tag, m);
      ok = ok && from_right_basis(pr, tag, to_right_basis(x)) == x;
      ++checks;
    }
    if (!ok) break;
  }
  return checks;
}

// Closed-formula right-hand sides of the ell = 2 Adem relations, compared
// against the Milnor-basis product (two independent computation paths).
struct AdemTerm {
  HPoly h;
  int c1, c2;  // h * Sq^{c1} Sq^{c2}; an exponent of 0 means the identity
};

std::vector<AdemTerm> adem_rhs_even(const Profile& pr, int a, int b) {
  std::vector<AdemTerm> out;
  for (int j = 0; j <= a / 2; ++j) {
    if (!binom_mod(b - 1 - j, a - 2 * j, 2)) continue;
    if (b % 2 == 0) {
      HPoly h = HPoly::mono(pr, 0, j % 2);
      if (!h.zero()) out.push_back({h, a + b - j, j});
    } else {
      out.push_back({HPoly::one(), a + b - j, j});
      if (j % 2) {
        HPoly h = HPoly::mono(pr, 1, 0);
        if (!h.zero()) out.push_back({h, a + b - j - 1, j});
      }
    }
  }
  return out;
}

std::vector<AdemTerm> adem_rhs(const Profile& pr, int a, int b) {
  if (a % 2 == 0) return adem_rhs_even(pr, a, b);
  std::vector<AdemTerm> out;
  for (auto& t : adem_rhs_even(pr, a - 1, b)) {
    HPoly bh = hp_beta(pr, t.h);
    if (!bh.zero()) out.push_back({bh, t.c1, t.c2});
    if (t.c1 % 2 == 0) out.push_back({t.h, t.c1 + 1, t.c2});
  }
  return out;
}

long long suite_adem(const Profile& pr, long long D, bool& ok) {
  if (pr.ell != 2) return 0;  // the closed formulas below are ell = 2 only
  long long checks = 0;
  int env = 4;
  AlgTag an = AlgTag::an(env);
  for (int b = 1; 1 + b <= D; ++b)
    for (int a = 1; a < 2 * b && a + b <= D; ++a) {
      MilnorElem lhs = milnor_mul(milnor_Sq(pr, an, a), milnor_Sq(pr, an, b));
      MilnorElem rhs(pr, an);
      for (auto& term : adem_rhs(pr, a, b)) {
        MilnorElem x = term.c1 ? milnor_Sq(pr, an, term.c1)
                               : MilnorElem::unit(pr, an);
        if (term.c2) x = milnor_mul(x, milnor_Sq(pr, an, term.c2));
        rhs.add_scaled(x, term.h);
      }
      MilnorElem diff = lhs;
      diff.add(rhs, -1);
      ok = ok && diff.zero();
      ++checks;
      if (!ok) return checks;
    }
  return checks;
}

int cmd_verify(const Common& C, const std::string& suite) {
  std::vector<Profile> profiles;
  if (!C.profile.empty()) {
    profiles.push_back(parse_profile(C.prime, C.profile));
  } else {
    profiles.push_back(Profile{C.prime, ProfileKind::Trivial});
    if (C.prime == 2) {
      profiles.push_back(Profile{2, ProfileKind::Complex});
      profiles.push_back(Profile{2, ProfileKind::Real});
    }
  }
  json report = json::array();
  bool all_ok = true;
  for (auto& pr : profiles)
    for (std::string name : {"hopf", "basis", "adem"}) {
      if (!suite.empty() && suite != name) continue;
      bool ok = true;
      long long checks = name == "hopf"   ? suite_hopf(pr, C.max_deg, ok)
                         : name == "basis" ? suite_basis(pr, C.max_deg, ok)
                                           : suite_adem(pr, C.max_deg, ok);
      if (checks == 0) continue;  // suite not applicable to this profile
      report.push_back({{"suite", name},
                        {"prime", pr.ell},
                        {"profile", profile_name(pr)},
                        {"max_deg", C.max_deg},
                        {"checks", checks},
                        {"pass", ok}});
      all_ok = all_ok && ok;
    }
  emit(report.dump(2), C.out);
  return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// chart / resolve

int cmd_chart(const Common& C, const std::string& mode) {
  Profile pr = parse_profile(C.prime, C.profile);
  WinSpec ws = parse_window(C.window);
  ExtWindow win = hull_of(ws);
  ExtChart ch;
  if (mode == "total-complex") {
    Tower T = parse_tower(pr, C.envelope, C.module);
    ch = total_complex_e2(T, C.envelope, win);
  } else if (mode == "ext") {
    FPModule M = parse_module(pr, C.envelope, C.module);
    ch = ext_dims(M, C.envelope, win);
  } else {
    throw CLI::ValidationError("--mode", "unknown mode '" + mode + "'");
  }
  json j = chart_to_json(ch, pr, C.envelope, ws);
  j["module"] = C.module;
  emit_chart(j, C);
  return 0;
}

int cmd_resolve(const Common& C) {
  Profile pr = parse_profile(C.prime, C.profile);
  WinSpec ws = parse_window(C.window);
  ExtWindow win = hull_of(ws);
  FPModule M = parse_module(pr, C.envelope, C.module);
  FreeResolution res = minimal_resolution(M, C.envelope, win);
  json j;
  j["prime"] = pr.ell;
  j["profile"] = profile_name(pr);
  j["envelope"] = C.envelope;
  j["module"] = C.module;
  j["window"]["s"] = {ws.smin, ws.smax};
  j["window"]["ts"] = {ws.ts_lo, ws.ts_hi};
  j["levels"] = json::array();
  for (size_t s = 0; s < res.cx.gens.size(); ++s) {
    json lv;
    lv["s"] = s;
    lv["generators"] = json::array();
    for (auto& [p, q] : res.cx.gens[s])
      lv["generators"].push_back({{"p", p}, {"q", q}});
    j["levels"].push_back(lv);
  }
  emit(j.dump(2), C.out);
  return 0;
}

// ---------------------------------------------------------------------------
// singer

struct OpSpec {
  char kind;  // 'b' beta, 'P' power, 'S' Sq, 'B' beta P
  int r = 0;
};

OpSpec parse_op(const std::string& s) {
  try {
    if (s == "b") return {'b', 0};
    if (s.rfind("bP", 0) == 0) return {'B', std::stoi(s.substr(2))};
    if (s.rfind("Sq", 0) == 0) return {'S', std::stoi(s.substr(2))};
    if (s.rfind("P", 0) == 0 && s.find('(') == std::string::npos)
      return {'P', std::stoi(s.substr(1))};
  } catch (...) {
  }
  throw CLI::ValidationError(
      "--op", "expected b, Sq<k>, P<r>, or bP<r>; got '" + s + "'");
}

int find_gen(const FPModule& M, const std::string& name) {
  for (size_t g = 0; g < M.gens.size(); ++g)
    if (M.gens[g].name == name) return static_cast<int>(g);
  if (!name.empty() && std::isdigit(static_cast<unsigned char>(name[0]))) {
    int g = std::atoi(name.c_str());
    if (g >= 0 && g < static_cast<int>(M.gens.size())) return g;
  }
  throw CLI::ValidationError("--element", "no generator named '" + name + "'");
}

// Small-construction slots: Sq<k> at ell = 2 (k = 2r + e), P<r>/bP<r> at odd
// ell.  Element syntax: "<slot>|<generator>".
std::pair<int, int> parse_small_slot(const Profile& pr, const std::string& s) {
  try {
    if (pr.ell == 2) {
      if (s.rfind("Sq", 0) != 0) throw 0;
      long long k = std::stoll(s.substr(2));
      long long r = k >= 0 ? k / 2 : -((-k + 1) / 2);  // floor division
      return {static_cast<int>(k - 2 * r), static_cast<int>(r)};
    }
    if (s.rfind("bP", 0) == 0) return {1, std::stoi(s.substr(2))};
    if (s.rfind("P", 0) == 0) return {0, std::stoi(s.substr(1))};
  } catch (CLI::ValidationError&) {
    throw;
  } catch (...) {
  }
  throw CLI::ValidationError("--element",
                             "bad small-construction slot '" + s + "'");
}

std::string small_slot_str(const Profile& pr, int e, int r) {
  if (pr.ell == 2) return "Sq" + std::to_string(2 * r + e);
  return (e ? "bP" : "P") + std::to_string(r);
}

// Large-construction slots: v^<k> or u*v^<k>.
std::pair<int, int> parse_large_slot(const std::string& s) {
  std::string rest = s;
  int i = 0;
  if (rest.rfind("u*", 0) == 0) {
    i = 1;
    rest = rest.substr(2);
  } else if (rest == "u") {
    return {1, 0};
  }
  if (rest == "1") return {i, 0};
  if (rest.rfind("v^", 0) == 0) {
    try {
      return {i, std::stoi(rest.substr(2))};
    } catch (...) {
    }
  } else if (rest == "v") {
    return {i, 1};
  }
  throw CLI::ValidationError("--element",
                             "bad large-construction slot '" + s + "'");
}

std::string large_slot_str(int i, int k) {
  std::string s = i ? "u" : "";
  if (k != 0 || !i) {
    if (!s.empty()) s += "*";
    s += "v^" + std::to_string(k);
  }
  return s;
}

int cmd_singer(const Common& C, const std::string& construction,
               const std::string& op_s, const std::string& element) {
  Profile pr = parse_profile(C.prime, C.profile);
  FPModule M = parse_module(pr, C.envelope, C.module);
  OpSpec op = parse_op(op_s);
  if (op.kind == 'S' && pr.ell != 2)
    throw CLI::ValidationError("--op", "Sq<k> requires --prime 2");
  auto bar = element.find('|');
  if (bar == std::string::npos)
    throw CLI::ValidationError("--element", "expected '<slot>|<generator>'");
  std::string slot = element.substr(0, bar);
  int g = find_gen(M, element.substr(bar + 1));
  std::ostringstream out;
  if (construction == "small") {
    auto [e, r] = parse_small_slot(pr, slot);
    SSElem x = SSElem::slot(e, r, g);
    SSElem y;
    switch (op.kind) {
      case 'b': y = rs_act_beta(M, x); break;
      case 'S': y = rs_act_sq(M, op.r, x); break;
      case 'P': y = rs_act_P(M, op.r, x); break;
      default: y = rs_act_beta(M, rs_act_P(M, op.r, x)); break;
    }
    if (y.zero()) out << "0";
    for (auto& [key, h] : y.ts) {
      auto [e2, r2, g2] = key;
      if (out.tellp() > 0) out << " + ";
      std::string c = hpoly_str(h);
      if (c != "1") out << "(" << c << ")*";
      out << small_slot_str(pr, e2, r2) << "|" << M.gens[g2].name;
    }
  } else if (construction == "large") {
    auto [i, k] = parse_large_slot(slot);
    SLElem x = SLElem::slot(i, k, g);
    SLElem y;
    switch (op.kind) {
      case 'b': y = rmu_act_beta(M, x); break;
      case 'S': y = rmu_act_sq(M, op.r, x); break;
      case 'P': y = rmu_act_P(M, op.r, x); break;
      default: y = rmu_act_beta(M, rmu_act_P(M, op.r, x)); break;
    }
    if (y.zero()) out << "0";
    for (auto& [key, h] : y.ts) {
      auto [i2, k2, g2] = key;
      if (out.tellp() > 0) out << " + ";
      std::string c = hpoly_str(h);
      if (c != "1") out << "(" << c << ")*";
      out << large_slot_str(i2, k2) << "|" << M.gens[g2].name;
    }
  } else {
    throw CLI::ValidationError("--construction", "expected small or large");
  }
  emit(out.str(), C.out);
  return 0;
}

// ---------------------------------------------------------------------------
// lin: residue Ext-equivalence with stabilization over band and envelope

ModHom residue_hom(const FPModule& M, const FPModule& N) {
  ModHom f;
  f.src = &M;
  f.dst = &N;
  for (size_t g = 0; g < M.gens.size(); ++g) {
    ModElem img;
    HElem r = residue(M, ModElem::gen(static_cast<int>(g)));
    if (!r.zero()) img.add(M.pr, 0, r.poly());
    f.images.push_back(std::move(img));
  }
  return f;
}

ModHom zero_hom(const FPModule& M, const FPModule& N) {
  ModHom f;
  f.src = &M;
  f.dst = &N;
  f.images.assign(M.gens.size(), ModElem{});
  return f;
}

// Calibrated band bottom (v-slots; the top stays at +4) per envelope:
// edge-artifact reach grows with the top degree of A(n), and roughly twice
// as fast again at ell = 3.
int band_klo(int ell, int n) {
  if (ell == 2) return n <= 1 ? -4 : 4 - 8 * n;
  if (n <= 0) return -4;
  if (n == 1) return -12;
  return -36 - 24 * (n - 2);
}

int cmd_lin(const Common& C, int nmax, int band_cap, bool use_zero_hom) {
  Profile pr = parse_profile(C.prime, C.profile);
  WinSpec ws = parse_window(C.window);
  ExtWindow win = hull_of(ws);
  StemRange stems{ws.ts_lo, ws.ts_hi};
  auto klo_of = [pr, band_cap](int n) {
    return band_cap > 0 ? 4 - 2 * band_cap * (pr.ell - 1) : band_klo(pr.ell, n);
  };
  EquivProblem P;
  P.src = [pr, klo_of](int n) {
    return suspend(bmu_band(pr, n, klo_of(n), 4), 1, 0);
  };
  P.src_confirm = [pr, klo_of](int n) {
    return suspend(bmu_band(pr, n, klo_of(n) - 4 * (pr.ell - 1), 4), 1, 0);
  };
  P.dst = [pr](int n) { return trivial_module(pr, n); };
  P.hom = use_zero_hom ? zero_hom : residue_hom;
  P.shifted_envelope = true;
  EquivResult r = ext_equiv_check(P, win, 0, nmax, stems);

  json j;
  j["prime"] = pr.ell;
  j["profile"] = profile_name(pr);
  j["window"]["s"] = {ws.smin, ws.smax};
  j["window"]["ts"] = {ws.ts_lo, ws.ts_hi};
  j["nmax"] = nmax;
  if (r.verdict == EquivVerdict::Inconclusive) {
    j["axis"] = r.failed_axis == EquivAxis::Band ? "band" : "envelope";
    if (r.failed_axis == EquivAxis::Band) {
      j["envelope"] = r.witness_n;
      j["band"] = {klo_of(r.witness_n), 4};
    }
    j["verdict"] = "INCONCLUSIVE";
    emit(j.dump(2), C.out);
    return 2;
  }
  j["witness"]["envelope"] = r.witness_n;
  j["witness"]["band"] = {klo_of(r.witness_n), 4};
  json mats = json::array();
  for (auto& [key, mat] : r.matrices) {
    auto [s, t, u] = key;
    if (mat.rows == 0 && mat.cols == 0) continue;
    json rows = json::array();
    for (int i = 0; i < mat.rows; ++i) {
      json row = json::array();
      for (int jj = 0; jj < mat.cols; ++jj) row.push_back(mat.at(i, jj));
      rows.push_back(row);
    }
    mats.push_back({{"s", s}, {"t", t}, {"u", u}, {"matrix", rows}});
  }
  j["matrices"] = mats;
  if (r.verdict == EquivVerdict::Fail) {
    auto [s, t, u] = r.fail_at;
    j["fail_at"] = {{"s", s}, {"t", t}, {"u", u}};
    j["verdict"] = "FAIL";
    emit(j.dump(2), C.out);
    return 1;
  }
  j["verdict"] = "ISO";
  emit(j.dump(2), C.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mod-ell motivic Steenrod algebra engine"};
  app.require_subcommand(1);
  (void)thread_cap();  // computations are sequential; the cap is honored trivially

  Common C;
  std::string suite, mode = "ext", construction = "small", op, element;
  int nmax = 4, band_cap = 0;
  bool zero_hom_flag = false;

  // Common options live on the top-level app; each subcommand enables
  // fallthrough so they may be written after the subcommand name.  This is
  // what lets a single flat key=value config file (processed by the
  // top-level parser) address them without section prefixes.
  app.add_option("--prime", C.prime, "coefficient prime (2 or 3)");
  app.add_option("--profile", C.profile, "trivial | complex | real");
  app.add_option("--envelope", C.envelope, "envelope n (work over A(n))");
  app.add_option("--window", C.window, "e.g. s=0..3,ts=0..6");
  app.add_option("--module", C.module, "module descriptor");
  app.add_option("--max-deg", C.max_deg, "degree cap for verification");
  app.add_option("--out", C.out, "output path (default stdout)");
  app.add_option("--format", C.format, "json | svg | txt");
  app.set_config("--config", "", "flat key=value config file");
  app.add_option("--save-config", C.save_config,
                 "write the effective flat key-value config to this path")
      ->configurable(false);

  CLI::App* verify = app.add_subcommand("verify", "run invariant suites");
  verify->fallthrough();
  verify->add_option("--suite", suite, "hopf | basis | adem (default: all)");

  CLI::App* chart = app.add_subcommand("chart", "Ext chart of a module");
  chart->fallthrough();
  chart->add_option("--mode", mode, "ext | total-complex");

  CLI::App* singer = app.add_subcommand("singer", "Singer-construction action");
  singer->fallthrough();
  singer->add_option("--construction", construction, "small | large");
  singer->add_option("--op", op, "b | Sq<k> | P<r> | bP<r>")->required();
  singer->add_option("--element", element, "<slot>|<generator>")->required();

  CLI::App* resolve = app.add_subcommand("resolve", "minimal free resolution");
  resolve->fallthrough();

  CLI::App* lin = app.add_subcommand("lin", "residue Ext-equivalence verdict");
  lin->fallthrough();
  lin->add_option("--nmax", nmax, "largest envelope to scan");
  lin->add_option("--band-cap", band_cap,
                  "fixed band half-width (0 = calibrated per-envelope depths)");
  lin->add_flag("--zero-hom", zero_hom_flag,
                "test hook: replace the residue map by zero");

  try {
    app.parse(argc, argv);
    CLI::App* sub = app.get_subcommands().front();
    if (!C.save_config.empty()) {
      std::ofstream f(C.save_config);
      f << app.config_to_str(false, false);
    }
    if (sub == verify) return cmd_verify(C, suite);
    if (sub == chart) return cmd_chart(C, mode);
    if (sub == singer) return cmd_singer(C, construction, op, element);
    if (sub == resolve) return cmd_resolve(C);
    return cmd_lin(C, nmax, band_cap, zero_hom_flag);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
