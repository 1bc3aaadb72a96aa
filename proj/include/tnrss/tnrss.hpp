#pragma once

#include "tnrss/encoding.hpp"
#include "tnrss/error.hpp"
#include "tnrss/group.hpp"
#include "tnrss/harness.hpp"
#include "tnrss/hex.hpp"
#include "tnrss/random.hpp"
#include "tnrss/redact.hpp"
#include "tnrss/scheme.hpp"
#include "tnrss/serialize.hpp"
#include "tnrss/shamir.hpp"
