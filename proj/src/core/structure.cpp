#include "dynint/core/structure.hpp"

namespace dynint {

void IntegrabilityStructure::validate() const {
  if (dim == 0) throw DimensionError("structure dimension must be positive");
  for (const auto& f : fields)
    if (f.dim() != dim) throw DimensionError("field " + f.name() + " has dimension " + std::to_string(f.dim()));
  for (const auto& g : integrals)
    if (g.dim() != dim) throw DimensionError("integral " + g.name() + " has dimension " + std::to_string(g.dim()));
  const std::size_t total = fields.size() + integrals.size();
  if (total > dim) throw DimensionError("structure has more than n fields and integrals");
  if (!partial && total != dim)
    throw DimensionError("complete structure needs m + (n-m) = n objects, got " + std::to_string(total));
}

}  // namespace dynint
