#include "rde/spec.hpp"

namespace rde {

NoiseDraw::NoiseDraw(const NoiseLaw& law, Rng rng) : law_(&law), term_rng_(rng.fork(1)) {
  arity_ = law.arity ? law.arity(rng) : 0;
  if (law.n_extra > 0) law.extra(rng, extra_.data());
  if (law.cross_ref && law.n_cross > 0) {
    Rng cr = rng.fork(2);
    for (int k = 0; k < law.n_cross; ++k) cross_[k] = (*law.cross_ref)[cr.index(law.cross_ref->size())];
  }
  if (arity_ > 16) terms_.reserve(std::size_t(arity_));
}

double NoiseDraw::term(std::size_t i) {
  while (terms_.size() <= i) {
    double prev = terms_.empty() ? 0.0 : terms_.back();
    terms_.push_back(law_->term(term_rng_, terms_.size(), prev));
  }
  return terms_[i];
}

}  // namespace rde
