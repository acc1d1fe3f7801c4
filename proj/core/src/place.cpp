#include "jonq/place.hpp"

namespace jonq {

template class Place<Rat>;
template class Place<Fp>;

template std::vector<std::pair<Place<Rat>, long>> support(const RatFunc<Rat>&);
template std::vector<std::pair<Place<Fp>, long>> support(const RatFunc<Fp>&);

}  // namespace jonq
