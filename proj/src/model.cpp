#include "implicert/model.hpp"

#include <array>
#include <stdexcept>
#include <vector>

namespace implicert {

Sign BlackboxModel::query(std::span<const Sign> x) const {
  if (static_cast<int>(x.size()) != dimension()) {
    throw std::invalid_argument("instance has dimension " + std::to_string(x.size()) + ", model expects " +
                                std::to_string(dimension()));
  }
  return do_query(x);
}

ExprModel::ExprModel(ModelExpr expr)
    : expr_(std::move(expr)), counter_(std::make_shared<QueryCounter>()) {}

Sign ExprModel::do_query(std::span<const Sign> x) const {
  counter_->increment();
  return expr_.evaluate(x);
}

RestrictedModel::RestrictedModel(ModelPtr parent, Restriction alpha)
    : parent_(std::move(parent)), alpha_(std::move(alpha)) {
  if (!parent_) throw std::invalid_argument("null parent model");
  if (!alpha_.fits(parent_->dimension())) throw std::out_of_range("restriction index out of range");
}

Sign RestrictedModel::do_query(std::span<const Sign> x) const {
  constexpr std::size_t kInline = 64;
  if (x.size() <= kInline) {
    std::array<Sign, kInline> buf;
    std::span<Sign> view(buf.data(), x.size());
    std::copy(x.begin(), x.end(), view.begin());
    alpha_.apply(view);
    return parent_->query(view);
  }
  std::vector<Sign> buf(x.begin(), x.end());
  alpha_.apply(buf);
  return parent_->query(buf);
}

std::shared_ptr<const ExprModel> make_model(ModelExpr expr) {
  return std::make_shared<const ExprModel>(std::move(expr));
}

std::shared_ptr<const ExprModel> make_model(std::string_view dsl_text) {
  return make_model(parse_model(dsl_text));
}

ModelPtr restrict(const ModelPtr& f, const Restriction& alpha) {
  if (!f) throw std::invalid_argument("null model");
  if (!alpha.fits(f->dimension())) throw std::out_of_range("restriction index out of range");
  if (const auto* view = dynamic_cast<const RestrictedModel*>(f.get())) {
    std::vector<Literal> merged(view->restriction().literals().begin(), view->restriction().literals().end());
    for (const auto& lit : alpha.literals()) {
      if (!view->restriction().contains(lit.feature)) merged.push_back(lit);
    }
    return std::make_shared<const RestrictedModel>(view->parent(), Restriction(std::move(merged)));
  }
  return std::make_shared<const RestrictedModel>(f, alpha);
}

}  // namespace implicert
