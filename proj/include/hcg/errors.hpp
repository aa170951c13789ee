#ifndef HCG_ERRORS_HPP
#define HCG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hcg {

// Machine-readable failure categories. Each maps to a distinct condition a
// caller may want to branch on (e.g. the alternative Walker frame
// normalization is selected when frame_needs_alt_normalization is raised).
enum class errc {
  point_outside_domain,
  jet_order_exceeded,
  singular_metric,
  frame_breakdown,
  frame_flat_direction,           // f_yy = 0: no curvature to normalize
  frame_needs_alt_normalization,  // f_yyy = 0 branch
  no_scale_exists,                // one model zero, the other not
  invariant_vanishes,
  non_killing_form,
  quadrature_failure,
  level_set_unreachable,
  bad_argument,
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

}  // namespace hcg

#endif
