#include "elball/normalizer.hpp"

#include <map>
#include <memory>
#include <set>

#include "elball/error.hpp"

namespace elball {

std::string_view to_string(NormalForm f) {
  switch (f) {
    case NormalForm::kNf1: return "NF1";
    case NormalForm::kNf2: return "NF2";
    case NormalForm::kNf3: return "NF3";
    case NormalForm::kNf4: return "NF4";
    case NormalForm::kBot1: return "BOT1";
    case NormalForm::kBot2: return "BOT2";
    case NormalForm::kBot4: return "BOT4";
    case NormalForm::kNotNormal: return "NotNormal";
  }
  return "?";
}

Ontology eliminate_abox(const Ontology& o) {
  Ontology out = o;
  for (auto& axiom : out.axioms) {
    if (const auto* r = std::get_if<RoleAssertion>(&axiom.body)) {
      axiom.body = GeneralInclusion{Concept::nominal(r->subject),
                                    Concept::existential(r->relation, Concept::nominal(r->object))};
    } else if (const auto* c = std::get_if<ClassAssertion>(&axiom.body)) {
      axiom.body = GeneralInclusion{Concept::nominal(c->individual), c->type};
    }
  }
  return out;
}

namespace {

using K = Concept::Kind;

bool named(const Concept& c) {
  return c.kind() == K::kAtomic || c.kind() == K::kNominal || c.kind() == K::kTop;
}

}  // namespace

NormalForm classify_axiom(const Axiom& a) {
  const auto* g = std::get_if<GeneralInclusion>(&a.body);
  if (g == nullptr) return NormalForm::kNotNormal;
  const Concept& l = g->sub;
  const Concept& r = g->super;
  const bool r_bot = r.kind() == K::kBot;
  if (named(l)) {
    if (r_bot) return NormalForm::kBot1;
    if (named(r)) return NormalForm::kNf1;
    if (r.kind() == K::kExistential && named(r.filler())) return NormalForm::kNf3;
    return NormalForm::kNotNormal;
  }
  if (!named(r) && !r_bot) return NormalForm::kNotNormal;
  if (l.kind() == K::kConjunction && named(l.lhs()) && named(l.rhs())) {
    return r_bot ? NormalForm::kBot2 : NormalForm::kNf2;
  }
  if (l.kind() == K::kExistential && named(l.filler())) {
    return r_bot ? NormalForm::kBot4 : NormalForm::kNf4;
  }
  return NormalForm::kNotNormal;
}

namespace {

// Concept expression over the theory's vocabulary. Nominals and Top are
// already folded into plain classes.
struct Term {
  enum class Kind { kClass, kBot, kAnd, kSome } kind;
  ClassId cls{};
  RelationId rel{};
  std::shared_ptr<const Term> left, right;

  bool is_class() const noexcept { return kind == Kind::kClass; }
};
using TermPtr = std::shared_ptr<const Term>;

TermPtr make_class(ClassId c) { return std::make_shared<const Term>(Term{Term::Kind::kClass, c}); }
TermPtr make_bot() { return std::make_shared<const Term>(Term{Term::Kind::kBot}); }
TermPtr make_and(TermPtr l, TermPtr r) {
  return std::make_shared<const Term>(Term{Term::Kind::kAnd, {}, {}, std::move(l), std::move(r)});
}
TermPtr make_some(RelationId rel, TermPtr filler) {
  return std::make_shared<const Term>(Term{Term::Kind::kSome, {}, rel, nullptr, std::move(filler)});
}

class Normalizer {
 public:
  explicit Normalizer(const Ontology& src) : src_(src) {}

  NormalizedTheory run() {
    for (const auto& axiom : src_.axioms) {
      const auto* g = std::get_if<GeneralInclusion>(&axiom.body);
      if (g == nullptr) {
        throw UnsupportedAxiom(std::to_string(axiom.pos.line) +
                               ": ABox axiom found; eliminate the ABox before normalizing");
      }
      pos_ = axiom.pos;
      TermPtr sub = simplify_sub(convert(g->sub));
      TermPtr super = simplify_super(convert(g->super));
      process(sub, super);
    }
    return std::move(out_);
  }

 private:
  TermPtr convert(const Concept& c) {
    switch (c.kind()) {
      case K::kTop: return make_class(ClassVocabulary::kTop);
      case K::kBot: return make_bot();
      case K::kAtomic: return make_class(out_.classes.intern(src_.classes.name(c.class_id())));
      case K::kNominal:
        return make_class(out_.classes.intern("{" + src_.individuals.name(c.individual()) + "}"));
      case K::kConjunction: return make_and(convert(c.lhs()), convert(c.rhs()));
      case K::kExistential:
        return make_some(out_.relations.intern(src_.relations.name(c.relation())),
                         convert(c.filler()));
    }
    return nullptr;
  }

  // Bot absorbs conjunctions and existentials on either side.
  static TermPtr absorb_bot(const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::kAnd: {
        auto l = absorb_bot(t->left);
        auto r = absorb_bot(t->right);
        if (l->kind == Term::Kind::kBot || r->kind == Term::Kind::kBot) return make_bot();
        return make_and(std::move(l), std::move(r));
      }
      case Term::Kind::kSome: {
        auto f = absorb_bot(t->right);
        if (f->kind == Term::Kind::kBot) return make_bot();
        return make_some(t->rel, std::move(f));
      }
      default:
        return t;
    }
  }

  TermPtr simplify_sub(const TermPtr& t) { return absorb_bot(t); }

  TermPtr simplify_super(const TermPtr& t) {
    reject_bot_filler(t);
    return absorb_bot(t);
  }

  void reject_bot_filler(const TermPtr& t) const {
    if (t->kind == Term::Kind::kAnd) {
      reject_bot_filler(t->left);
      reject_bot_filler(t->right);
    } else if (t->kind == Term::Kind::kSome) {
      if (absorb_bot(t->right)->kind == Term::Kind::kBot) {
        throw UnsupportedAxiom(std::to_string(pos_.line) + ":" + std::to_string(pos_.column) +
                               ": existential restriction to Bot on the right-hand side has no "
                               "normal form");
      }
      reject_bot_filler(t->right);
    }
  }

  std::string key(const TermPtr& t) const {
    switch (t->kind) {
      case Term::Kind::kClass: return "c" + std::to_string(t->cls.value);
      case Term::Kind::kBot: return "B";
      case Term::Kind::kAnd: return "(" + key(t->left) + "&" + key(t->right) + ")";
      case Term::Kind::kSome:
        return "(r" + std::to_string(t->rel.value) + "." + key(t->right) + ")";
    }
    return {};
  }

  TermPtr fresh_for(const TermPtr& t) {
    auto k = key(t);
    if (auto it = shared_.find(k); it != shared_.end()) return make_class(it->second);
    std::string name;
    do {
      name = "N#" + std::to_string(counter_++);
    } while (out_.classes.find(name).has_value());
    const ClassId id = out_.classes.intern(name);
    out_.fresh.push_back(id);
    shared_.emplace(std::move(k), id);
    return make_class(id);
  }

  template <class T>
  void emit(std::vector<T>& bucket, std::set<T>& seen, T value) {
    if (seen.insert(value).second) bucket.push_back(value);
  }

  void process(const TermPtr& sub, const TermPtr& super) {
    using TK = Term::Kind;
    if (sub->kind == TK::kBot) return;
    const bool super_bot = super->kind == TK::kBot;

    if (sub->is_class()) {
      if (super_bot) return emit(out_.bot1, bot1_, Bot1{sub->cls});
      if (super->is_class()) return emit(out_.nf1, nf1_, Nf1{sub->cls, super->cls});
      if (super->kind == TK::kAnd) {
        process(sub, super->left);
        process(sub, super->right);
        return;
      }
      // super is an existential
      const TermPtr& filler = super->right;
      if (filler->is_class()) return emit(out_.nf3, nf3_, Nf3{sub->cls, super->rel, filler->cls});
      TermPtr a = fresh_for(filler);
      emit(out_.nf3, nf3_, Nf3{sub->cls, super->rel, a->cls});
      process(a, filler);
      return;
    }

    if (super_bot || super->is_class()) {
      if (sub->kind == TK::kAnd) {
        const TermPtr& l = sub->left;
        const TermPtr& r = sub->right;
        if (l->is_class() && r->is_class()) {
          if (super_bot) return emit(out_.bot2, bot2_, Bot2{l->cls, r->cls});
          return emit(out_.nf2, nf2_, Nf2{l->cls, r->cls, super->cls});
        }
        if (!l->is_class()) {
          TermPtr a = fresh_for(l);
          process(l, a);
          process(make_and(a, r), super);
        } else {
          TermPtr a = fresh_for(r);
          process(r, a);
          process(make_and(l, a), super);
        }
        return;
      }
      // sub is an existential
      const TermPtr& filler = sub->right;
      if (filler->is_class()) {
        if (super_bot) return emit(out_.bot4, bot4_, Bot4{sub->rel, filler->cls});
        return emit(out_.nf4, nf4_, Nf4{sub->rel, filler->cls, super->cls});
      }
      TermPtr a = fresh_for(filler);
      process(filler, a);
      process(make_some(sub->rel, a), super);
      return;
    }

    // Both sides complex.
    TermPtr a = fresh_for(sub);
    process(sub, a);
    process(a, super);
  }

  const Ontology& src_;
  NormalizedTheory out_;
  SourcePos pos_{};
  std::size_t counter_ = 0;
  std::map<std::string, ClassId> shared_;
  std::set<Nf1> nf1_;
  std::set<Nf2> nf2_;
  std::set<Nf3> nf3_;
  std::set<Nf4> nf4_;
  std::set<Bot1> bot1_;
  std::set<Bot2> bot2_;
  std::set<Bot4> bot4_;
};

std::string class_text(const NormalizedTheory& t, ClassId c) {
  // "{a}" names parse back as nominals, which normalize to the same class.
  return t.classes.name(c);
}

}  // namespace

NormalizedTheory normalize(const Ontology& o) { return Normalizer(o).run(); }

std::string format_theory(const NormalizedTheory& t) {
  std::string out;
  auto c = [&](ClassId id) { return class_text(t, id); };
  auto r = [&](RelationId id) { return t.relations.name(id); };
  out += "# NF1\n";
  for (const auto& a : t.nf1) out += c(a.sub) + " < " + c(a.super) + "\n";
  out += "# NF2\n";
  for (const auto& a : t.nf2) out += c(a.left) + " and " + c(a.right) + " < " + c(a.super) + "\n";
  out += "# NF3\n";
  for (const auto& a : t.nf3) out += c(a.sub) + " < " + r(a.relation) + " some " + c(a.filler) + "\n";
  out += "# NF4\n";
  for (const auto& a : t.nf4) out += r(a.relation) + " some " + c(a.filler) + " < " + c(a.super) + "\n";
  out += "# BOT1\n";
  for (const auto& a : t.bot1) out += c(a.sub) + " < Bot\n";
  out += "# BOT2\n";
  for (const auto& a : t.bot2) out += c(a.left) + " and " + c(a.right) + " < Bot\n";
  out += "# BOT4\n";
  for (const auto& a : t.bot4) out += r(a.relation) + " some " + c(a.filler) + " < Bot\n";
  return out;
}

}  // namespace elball
