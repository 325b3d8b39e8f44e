//! Exact computations on sumsets, iterated sumsets and subsequence sums in
//! finite abelian groups.

pub mod bits;
pub mod critical;
pub mod enumerate;
pub mod error;
pub mod group;
pub mod literal;
pub mod sequence;
pub mod structure;
pub mod subset;
pub mod zerosum;

pub use bits::Bits;
pub use error::{Error, Result};
pub use group::{groups_of_order, groups_up_to, make_group, Element, Group, QuotientMap, Subgroup};
pub use subset::{CosetDecomposition, GroupSubset, ProgressionCover, QuasiPeriodicDecomposition};
pub use sequence::{
    CosetCondition, CosetViolation, PartitionExtraCheck, PartitionOutcome, Sequence, SetPartition,
    SubsumKneserReport,
};
pub use critical::{
    classify_elementary, classify_kst, kneser_data, pigeonhole_check, ElementaryDetail,
    ElementaryTag, ElementaryType, KneserData, KstCase, KstTag, KstWitness, Side, SubConditions,
};
pub use structure::{
    check_cor_large_n, classify_main, classify_size3, size3_cardinality_spectrum, size3_spectrum,
    Classification, Cor1Item, CorollaryKind, CorollaryReport, LadderWitness, LargeNReport,
    Observed, Prediction, QuasiConditions, SpectrumReport, StructureCase, StructureTag,
    StructureWitness,
};
pub use enumerate::{count_bounded_vectors, sequence_leaders, subset_orbits, SubsetOrbit, Symmetries};
pub use zerosum::{
    build_example, davenport, default_symmetries, dstar, item_hypothesis, verify_egz,
    verify_main_nsums, verify_main_nsums_with, verify_main_olson, verify_olson, Claim,
    ExampleParams, ExtremalWitness, Family, Theorem, TheoremVerdict, VerdictParameters,
    DEFAULT_NODE_BUDGET,
};
pub use literal::{
    format_element, format_sequence, format_subset, parse_element, parse_group, parse_sequence,
    parse_subset,
};
