#include "alf/loss_spec.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

#include "alf/csv.hpp"
#include "alf/errors.hpp"

namespace alf {
namespace {

struct FamilyEntry {
  Family family;
  std::string_view name;
};

constexpr std::array<FamilyEntry, 13> kFamilies{{
    {Family::CE, "ce"},
    {Family::FL, "fl"},
    {Family::MAE, "mae"},
    {Family::RCE, "rce"},
    {Family::GCE, "gce"},
    {Family::SCE, "sce"},
    {Family::NCE, "nce"},
    {Family::NFL, "nfl"},
    {Family::NGCE, "ngce"},
    {Family::AGCE, "agce"},
    {Family::AUL, "aul"},
    {Family::AEL, "ael"},
    {Family::APL, "apl"},
}};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Defaults follow the CIFAR-10 column of the reference parameter table.
LossParams defaults_for(Family f) {
  LossParams p;
  switch (f) {
    case Family::FL:
    case Family::NFL: p.gamma = 0.5; break;
    case Family::GCE:
    case Family::NGCE: p.q = 0.7; break;
    case Family::SCE: p.alpha = 0.1; p.beta = 1.0; break;
    case Family::AGCE: p.a = 0.6; p.q = 0.6; break;
    case Family::AUL: p.a = 5.5; p.p = 3.0; break;
    case Family::AEL: p.a = 2.5; break;
    default: break;
  }
  return p;
}

double* field(LossParams& p, Family f, std::string_view key) {
  const std::string k = lower(key);
  const auto names = parameter_names(f);
  const bool used = std::any_of(names.begin(), names.end(),
                                [&](std::string_view n) { return lower(n) == k; });
  if (!used) return nullptr;
  // 'a' is ambiguous only in spelling: RCE and SCE have no shift parameter,
  // so there it names the log-zero constant A.
  if (k == "a") return (f == Family::RCE || f == Family::SCE) ? &p.A : &p.a;
  if (k == "q") return &p.q;
  if (k == "p") return &p.p;
  if (k == "gamma") return &p.gamma;
  if (k == "alpha") return &p.alpha;
  if (k == "beta") return &p.beta;
  return nullptr;
}

// Splits on commas at parenthesis depth zero.
std::vector<std::string_view> split_top_level(std::string_view s) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') {
      if (--depth < 0) throw InvalidInput("unbalanced ')' in loss spec");
    }
    if (s[i] == ',' && depth == 0) {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) throw InvalidInput("unbalanced '(' in loss spec");
  parts.push_back(trim(s.substr(start)));
  return parts;
}

double parse_value(std::string_view text, std::string_view key) {
  text = trim(text);
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw InvalidInput("parameter '" + std::string(key) + "' has non-numeric value '" +
                       std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string_view family_name(Family f) noexcept {
  for (const auto& e : kFamilies) {
    if (e.family == f) return e.name;
  }
  return "?";
}

std::optional<Family> family_from_name(std::string_view name) {
  const std::string n = lower(trim(name));
  for (const auto& e : kFamilies) {
    if (e.name == n) return e.family;
  }
  if (n == "focal") return Family::FL;
  return std::nullopt;
}

std::vector<std::string_view> parameter_names(Family family) {
  switch (family) {
    case Family::FL:
    case Family::NFL: return {"gamma"};
    case Family::RCE: return {"A"};
    case Family::GCE:
    case Family::NGCE: return {"q"};
    case Family::SCE: return {"alpha", "beta", "A"};
    case Family::AGCE: return {"a", "q"};
    case Family::AUL: return {"a", "p"};
    case Family::AEL: return {"a"};
    case Family::APL: return {"alpha", "beta"};
    default: return {};
  }
}

LossSpec::LossSpec(Family family, LossParams params, std::vector<LossSpec> children)
    : family_(family), params_(params), children_(std::move(children)) {
  validate();
}

void LossSpec::validate() const {
  const auto& p = params_;
  const auto require = [&](bool ok, const char* what) {
    if (!ok) {
      throw InvalidInput(std::string(family_name(family_)) + ": " + what);
    }
  };
  for (double v : {p.a, p.q, p.p, p.gamma, p.A, p.alpha, p.beta}) {
    require(std::isfinite(v), "parameters must be finite");
  }
  if (family_ != Family::APL) require(children_.empty(), "only apl takes child losses");
  switch (family_) {
    case Family::FL:
    case Family::NFL: require(p.gamma >= 0.0, "gamma must be >= 0"); break;
    case Family::RCE: require(p.A < 0.0, "A must be < 0"); break;
    case Family::GCE:
    case Family::NGCE: require(p.q > 0.0 && p.q <= 1.0, "q must lie in (0, 1]"); break;
    case Family::SCE:
      require(p.alpha > 0.0 && p.beta > 0.0, "alpha and beta must be > 0");
      require(p.A < 0.0, "A must be < 0");
      break;
    case Family::AGCE: require(p.a > 0.0 && p.q > 0.0, "requires a > 0 and q > 0"); break;
    case Family::AUL: require(p.a > 1.0 && p.p > 0.0, "requires a > 1 and p > 0"); break;
    case Family::AEL: require(p.a > 0.0, "requires a > 0"); break;
    case Family::APL:
      require(children_.size() == 2, "needs exactly two child losses");
      require(p.alpha > 0.0 && p.beta > 0.0, "alpha and beta must be > 0");
      for (const auto& c : children_) {
        require(c.family() != Family::APL, "children may not themselves be apl");
      }
      break;
    default: break;
  }
}

LossSpec LossSpec::make(Family family, LossParams params, std::vector<LossSpec> children) {
  return LossSpec(family, params, std::move(children));
}

LossSpec LossSpec::ce() { return make(Family::CE, {}); }
LossSpec LossSpec::mae() { return make(Family::MAE, {}); }
LossSpec LossSpec::nce() { return make(Family::NCE, {}); }

LossSpec LossSpec::focal(double gamma) {
  LossParams p;
  p.gamma = gamma;
  return make(Family::FL, p);
}

LossSpec LossSpec::nfl(double gamma) {
  LossParams p;
  p.gamma = gamma;
  return make(Family::NFL, p);
}

LossSpec LossSpec::rce(double A) {
  LossParams p;
  p.A = A;
  return make(Family::RCE, p);
}

LossSpec LossSpec::gce(double q) {
  LossParams p;
  p.q = q;
  return make(Family::GCE, p);
}

LossSpec LossSpec::ngce(double q) {
  LossParams p;
  p.q = q;
  return make(Family::NGCE, p);
}

LossSpec LossSpec::sce(double alpha, double beta, double A) {
  LossParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.A = A;
  return make(Family::SCE, p);
}

LossSpec LossSpec::agce(double a, double q) {
  LossParams p;
  p.a = a;
  p.q = q;
  return make(Family::AGCE, p);
}

LossSpec LossSpec::aul(double a, double pw) {
  LossParams p;
  p.a = a;
  p.p = pw;
  return make(Family::AUL, p);
}

LossSpec LossSpec::ael(double a) {
  LossParams p;
  p.a = a;
  return make(Family::AEL, p);
}

LossSpec LossSpec::apl(LossSpec first, LossSpec second, double alpha, double beta) {
  LossParams p;
  p.alpha = alpha;
  p.beta = beta;
  std::vector<LossSpec> children;
  children.push_back(std::move(first));
  children.push_back(std::move(second));
  return make(Family::APL, p, std::move(children));
}

const LossSpec& LossSpec::first() const {
  if (children_.size() != 2) throw InvalidInput("not an apl combination");
  return children_[0];
}

const LossSpec& LossSpec::second() const {
  if (children_.size() != 2) throw InvalidInput("not an apl combination");
  return children_[1];
}

std::optional<double> LossSpec::param(std::string_view key) const {
  LossParams copy = params_;
  const double* f = field(copy, family_, key);
  if (f == nullptr) return std::nullopt;
  return *f;
}

LossSpec LossSpec::with_param(std::string_view key, double value) const {
  LossParams copy = params_;
  double* f = field(copy, family_, key);
  if (f == nullptr) {
    throw InvalidInput(std::string(family_name(family_)) + " has no parameter '" +
                       std::string(key) + "'");
  }
  *f = value;
  return LossSpec(family_, copy, children_);
}

std::string LossSpec::params_string() const {
  std::string out;
  const auto append = [&](std::string piece) {
    if (!out.empty()) out += ',';
    out += piece;
  };
  if (family_ == Family::APL) {
    append(children_[0].to_string());
    append(children_[1].to_string());
  }
  for (std::string_view name : parameter_names(family_)) {
    append(std::string(name) + "=" + format_number(*param(name)));
  }
  return out;
}

std::string LossSpec::to_string() const {
  std::string out(family_name(family_));
  const std::string inner = params_string();
  if (!inner.empty()) out += "(" + inner + ")";
  return out;
}

bool operator==(const LossSpec& lhs, const LossSpec& rhs) {
  if (lhs.family_ != rhs.family_ || lhs.children_ != rhs.children_) return false;
  // Compare only the parameters the family uses.
  for (std::string_view name : parameter_names(lhs.family_)) {
    if (*lhs.param(name) != *rhs.param(name)) return false;
  }
  return true;
}

LossSpec parse_loss_spec(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw InvalidInput("empty loss spec");
  const auto open = s.find('(');
  const std::string_view name = trim(s.substr(0, open));
  const auto family = family_from_name(name);
  if (!family) throw InvalidInput("unknown loss family '" + std::string(name) + "'");

  LossParams params = defaults_for(*family);
  std::vector<LossSpec> children;
  if (open != std::string_view::npos) {
    if (s.back() != ')') throw InvalidInput("loss spec must end with ')': " + std::string(s));
    const std::string_view inner = s.substr(open + 1, s.size() - open - 2);
    if (!trim(inner).empty()) {
      for (std::string_view item : split_top_level(inner)) {
        if (item.empty()) throw InvalidInput("empty item in loss spec '" + std::string(s) + "'");
        const auto eq = item.find('=');
        const auto paren = item.find('(');
        const bool is_pair = eq != std::string_view::npos &&
                             (paren == std::string_view::npos || eq < paren);
        if (!is_pair) {
          if (*family != Family::APL) {
            throw InvalidInput("positional item '" + std::string(item) +
                               "' is only allowed in apl");
          }
          children.push_back(parse_loss_spec(item));
          continue;
        }
        const std::string_view key = trim(item.substr(0, eq));
        double* slot = field(params, *family, key);
        if (slot == nullptr) {
          throw InvalidInput(std::string(family_name(*family)) + " has no parameter '" +
                             std::string(key) + "'");
        }
        *slot = parse_value(item.substr(eq + 1), key);
      }
    }
  }
  return LossSpec::make(*family, params, std::move(children));
}

}  // namespace alf
