#include "polystoch/caps.hpp"

#include <cstdlib>

namespace polystoch {

Caps& caps() {
    static Caps c = [] {
        Caps init;
        if (const char* env = std::getenv("POLYSTOCH_CAP")) {
            char* end = nullptr;
            long long v = std::strtoll(env, &end, 10);
            if (end != env && v > 0) {
                init.species_nodes = v;
                init.permanent_s_nodes = v;
                init.cover_nodes = v;
                init.enumeration_nodes = v;
            }
        }
        return init;
    }();
    return c;
}

} // namespace polystoch
