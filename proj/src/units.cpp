#include "fdwifi/units.hpp"
