#ifndef NATHANSON_NATHANSON_HPP
#define NATHANSON_NATHANSON_HPP

#include "nathanson/error.hpp"
#include "nathanson/numeral.hpp"
#include "nathanson/partition.hpp"
#include "nathanson/basis.hpp"
#include "nathanson/certificate.hpp"
#include "nathanson/splitter.hpp"
#include "nathanson/avoid4.hpp"
#include "nathanson/json_io.hpp"
#include "nathanson/oracle.hpp"

#endif // NATHANSON_NATHANSON_HPP
