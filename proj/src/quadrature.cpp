#include "vdflow/quadrature.hpp"

#include "vdflow/errors.hpp"

#include <array>
#include <string>

namespace vdflow {

namespace {

// Symmetric Gauss-type tables on the reference triangle, one orbit-structured
// rule per exactness degree. Barycentric coordinates and weights carry the
// full double precision; weights sum to the reference area 1/2.
// degree 1, 1 points
static constexpr QuadPoint kRuleDeg1[] = {
    {0.3333333333333333333, 0.3333333333333333333, 0.3333333333333333333, 0.5000000000000000000},
};

// degree 2, 3 points
static constexpr QuadPoint kRuleDeg2[] = {
    {0.1666666666666666667, 0.1666666666666666667, 0.6666666666666666667, 0.1666666666666666667},
    {0.1666666666666666667, 0.6666666666666666667, 0.1666666666666666667, 0.1666666666666666667},
    {0.6666666666666666667, 0.1666666666666666667, 0.1666666666666666667, 0.1666666666666666667},
};

// degree 4, 6 points
static constexpr QuadPoint kRuleDeg4[] = {
    {0.1081030181680702274, 0.4459484909159648863, 0.4459484909159648863, 0.1116907948390057328},
    {0.4459484909159648863, 0.1081030181680702274, 0.4459484909159648863, 0.1116907948390057328},
    {0.4459484909159648863, 0.4459484909159648863, 0.1081030181680702274, 0.1116907948390057328},
    {0.09157621350977074346, 0.09157621350977074346, 0.8168475729804585131, 0.05497587182766093382},
    {0.09157621350977074346, 0.8168475729804585131, 0.09157621350977074346, 0.05497587182766093382},
    {0.8168475729804585131, 0.09157621350977074346, 0.09157621350977074346, 0.05497587182766093382},
};

// degree 5, 7 points
static constexpr QuadPoint kRuleDeg5[] = {
    {0.3333333333333333333, 0.3333333333333333333, 0.3333333333333333333, 0.1125000000000000000},
    {0.05971587178976982046, 0.4701420641051150898, 0.4701420641051150898, 0.06619707639425309037},
    {0.4701420641051150898, 0.05971587178976982046, 0.4701420641051150898, 0.06619707639425309037},
    {0.4701420641051150898, 0.4701420641051150898, 0.05971587178976982046, 0.06619707639425309037},
    {0.1012865073234563388, 0.1012865073234563388, 0.7974269853530873224, 0.06296959027241357630},
    {0.1012865073234563388, 0.7974269853530873224, 0.1012865073234563388, 0.06296959027241357630},
    {0.7974269853530873224, 0.1012865073234563388, 0.1012865073234563388, 0.06296959027241357630},
};

// degree 6, 12 points
static constexpr QuadPoint kRuleDeg6[] = {
    {0.2492867451709104213, 0.2492867451709104213, 0.5014265096581791574, 0.05839313786318968301},
    {0.2492867451709104213, 0.5014265096581791574, 0.2492867451709104213, 0.05839313786318968301},
    {0.5014265096581791574, 0.2492867451709104213, 0.2492867451709104213, 0.05839313786318968301},
    {0.06308901449150222834, 0.06308901449150222834, 0.8738219710169955433, 0.02542245318510340846},
    {0.06308901449150222834, 0.8738219710169955433, 0.06308901449150222834, 0.02542245318510340846},
    {0.8738219710169955433, 0.06308901449150222834, 0.06308901449150222834, 0.02542245318510340846},
    {0.05314504984481694735, 0.3103524510337844054, 0.6365024991213986472, 0.04142553780918678760},
    {0.05314504984481694735, 0.6365024991213986472, 0.3103524510337844054, 0.04142553780918678760},
    {0.3103524510337844054, 0.05314504984481694735, 0.6365024991213986472, 0.04142553780918678760},
    {0.3103524510337844054, 0.6365024991213986472, 0.05314504984481694735, 0.04142553780918678760},
    {0.6365024991213986472, 0.05314504984481694735, 0.3103524510337844054, 0.04142553780918678760},
    {0.6365024991213986472, 0.3103524510337844054, 0.05314504984481694735, 0.04142553780918678760},
};

// degree 8, 16 points
static constexpr QuadPoint kRuleDeg8[] = {
    {0.3333333333333333333, 0.3333333333333333333, 0.3333333333333333333, 0.07215780383889358413},
    {0.08141482341455368794, 0.4592925882927231560, 0.4592925882927231560, 0.04754581713364231240},
    {0.4592925882927231560, 0.08141482341455368794, 0.4592925882927231560, 0.04754581713364231240},
    {0.4592925882927231560, 0.4592925882927231560, 0.08141482341455368794, 0.04754581713364231240},
    {0.1705693077517602066, 0.1705693077517602066, 0.6588613844964795868, 0.05160868526735912514},
    {0.1705693077517602066, 0.6588613844964795868, 0.1705693077517602066, 0.05160868526735912514},
    {0.6588613844964795868, 0.1705693077517602066, 0.1705693077517602066, 0.05160868526735912514},
    {0.05054722831703097546, 0.05054722831703097546, 0.8989055433659380491, 0.01622924881159904016},
    {0.05054722831703097546, 0.8989055433659380491, 0.05054722831703097546, 0.01622924881159904016},
    {0.8989055433659380491, 0.05054722831703097546, 0.05054722831703097546, 0.01622924881159904016},
    {0.008394777409957605337, 0.2631128296346381134, 0.7284923929554042812, 0.01361515708721749713},
    {0.008394777409957605337, 0.7284923929554042812, 0.2631128296346381134, 0.01361515708721749713},
    {0.2631128296346381134, 0.008394777409957605337, 0.7284923929554042812, 0.01361515708721749713},
    {0.2631128296346381134, 0.7284923929554042812, 0.008394777409957605337, 0.01361515708721749713},
    {0.7284923929554042812, 0.008394777409957605337, 0.2631128296346381134, 0.01361515708721749713},
    {0.7284923929554042812, 0.2631128296346381134, 0.008394777409957605337, 0.01361515708721749713},
};

// degree 9, 19 points
static constexpr QuadPoint kRuleDeg9[] = {
    {0.3333333333333333333, 0.3333333333333333333, 0.3333333333333333333, 0.04856789814139941691},
    {0.02063496160252474443, 0.4896825191987376278, 0.4896825191987376278, 0.01566735011356953527},
    {0.4896825191987376278, 0.02063496160252474443, 0.4896825191987376278, 0.01566735011356953527},
    {0.4896825191987376278, 0.4896825191987376278, 0.02063496160252474443, 0.01566735011356953527},
    {0.1258208170141267255, 0.4370895914929366373, 0.4370895914929366373, 0.03891377050238713966},
    {0.4370895914929366373, 0.1258208170141267255, 0.4370895914929366373, 0.03891377050238713966},
    {0.4370895914929366373, 0.4370895914929366373, 0.1258208170141267255, 0.03891377050238713966},
    {0.1882035356190327302, 0.1882035356190327302, 0.6235929287619345395, 0.03982386946360512652},
    {0.1882035356190327302, 0.6235929287619345395, 0.1882035356190327302, 0.03982386946360512652},
    {0.6235929287619345395, 0.1882035356190327302, 0.1882035356190327302, 0.03982386946360512652},
    {0.04472951339445270987, 0.04472951339445270987, 0.9105409732110945803, 0.01278883782934901563},
    {0.04472951339445270987, 0.9105409732110945803, 0.04472951339445270987, 0.01278883782934901563},
    {0.9105409732110945803, 0.04472951339445270987, 0.04472951339445270987, 0.01278883782934901563},
    {0.03683841205473628363, 0.2219629891607656957, 0.7411985987844980207, 0.02164176968864468864},
    {0.03683841205473628363, 0.7411985987844980207, 0.2219629891607656957, 0.02164176968864468864},
    {0.2219629891607656957, 0.03683841205473628363, 0.7411985987844980207, 0.02164176968864468864},
    {0.2219629891607656957, 0.7411985987844980207, 0.03683841205473628363, 0.02164176968864468864},
    {0.7411985987844980207, 0.03683841205473628363, 0.2219629891607656957, 0.02164176968864468864},
    {0.7411985987844980207, 0.2219629891607656957, 0.03683841205473628363, 0.02164176968864468864},
};

// degree 10, 25 points
static constexpr QuadPoint kRuleDeg10[] = {
    {0.3333333333333333333, 0.3333333333333333333, 0.3333333333333333333, 0.04540899519137679005},
    {0.02884473323268524526, 0.4855776333836573774, 0.4855776333836573774, 0.01836297887823335236},
    {0.4855776333836573774, 0.02884473323268524526, 0.4855776333836573774, 0.01836297887823335236},
    {0.4855776333836573774, 0.4855776333836573774, 0.02884473323268524526, 0.01836297887823335236},
    {0.1094815754850370548, 0.1094815754850370548, 0.7810368490299258904, 0.02266052971776396739},
    {0.1094815754850370548, 0.7810368490299258904, 0.1094815754850370548, 0.02266052971776396739},
    {0.7810368490299258904, 0.1094815754850370548, 0.1094815754850370548, 0.02266052971776396739},
    {0.1417072194148799548, 0.3079398387641209502, 0.5503529418209990951, 0.03637895842271005430},
    {0.1417072194148799548, 0.5503529418209990951, 0.3079398387641209502, 0.03637895842271005430},
    {0.3079398387641209502, 0.1417072194148799548, 0.5503529418209990951, 0.03637895842271005430},
    {0.3079398387641209502, 0.5503529418209990951, 0.1417072194148799548, 0.03637895842271005430},
    {0.5503529418209990951, 0.1417072194148799548, 0.3079398387641209502, 0.03637895842271005430},
    {0.5503529418209990951, 0.3079398387641209502, 0.1417072194148799548, 0.03637895842271005430},
    {0.02500353476268638607, 0.2466725606399026939, 0.7283239045974109200, 0.01416362126552874242},
    {0.02500353476268638607, 0.7283239045974109200, 0.2466725606399026939, 0.01416362126552874242},
    {0.2466725606399026939, 0.02500353476268638607, 0.7283239045974109200, 0.01416362126552874242},
    {0.2466725606399026939, 0.7283239045974109200, 0.02500353476268638607, 0.01416362126552874242},
    {0.7283239045974109200, 0.02500353476268638607, 0.2466725606399026939, 0.01416362126552874242},
    {0.7283239045974109200, 0.2466725606399026939, 0.02500353476268638607, 0.01416362126552874242},
    {0.009540815400299457580, 0.06680325101220026577, 0.9236559335875002766, 0.004710833481866411730},
    {0.009540815400299457580, 0.9236559335875002766, 0.06680325101220026577, 0.004710833481866411730},
    {0.06680325101220026577, 0.009540815400299457580, 0.9236559335875002766, 0.004710833481866411730},
    {0.06680325101220026577, 0.9236559335875002766, 0.009540815400299457580, 0.004710833481866411730},
    {0.9236559335875002766, 0.009540815400299457580, 0.06680325101220026577, 0.004710833481866411730},
    {0.9236559335875002766, 0.06680325101220026577, 0.009540815400299457580, 0.004710833481866411730},
};

struct TableRef {
    int degree;
    const QuadPoint* points;
    int count;
};

constexpr TableRef kTables[] = {
    {1, kRuleDeg1, static_cast<int>(std::size(kRuleDeg1))},
    {2, kRuleDeg2, static_cast<int>(std::size(kRuleDeg2))},
    {4, kRuleDeg4, static_cast<int>(std::size(kRuleDeg4))},
    {5, kRuleDeg5, static_cast<int>(std::size(kRuleDeg5))},
    {6, kRuleDeg6, static_cast<int>(std::size(kRuleDeg6))},
    {8, kRuleDeg8, static_cast<int>(std::size(kRuleDeg8))},
    {9, kRuleDeg9, static_cast<int>(std::size(kRuleDeg9))},
    {10, kRuleDeg10, static_cast<int>(std::size(kRuleDeg10))},
};

} // namespace

const QuadratureRule& quadrature_rule(int degree) {
    if (degree < 1 || degree > kMaxQuadratureDegree)
        throw UnsupportedDegreeError("quadrature_rule: degree " + std::to_string(degree) +
                                     " outside supported range [1, " +
                                     std::to_string(kMaxQuadratureDegree) + "]");
    static const std::array<QuadratureRule, std::size(kTables)> rules = [] {
        std::array<QuadratureRule, std::size(kTables)> out;
        for (size_t i = 0; i < std::size(kTables); ++i) {
            out[i].degree = kTables[i].degree;
            out[i].points.assign(kTables[i].points, kTables[i].points + kTables[i].count);
        }
        return out;
    }();
    for (size_t i = 0; i < rules.size(); ++i)
        if (rules[i].degree >= degree) return rules[i];
    return rules.back(); // unreachable
}

} // namespace vdflow
