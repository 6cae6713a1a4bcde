//! Transcription of the published relation/dimension table, row by row.
//! Reviewed by hand against the source table.

use kgdim::{default_mapping, Dimension, Lookup, Polarity};

// (source, relation as it appears in edge files, dimension name, negated)
pub const TRANSCRIPTION: &[(&str, &str, &str, bool)] = &[
    // lexical
    ("CN", "/r/FormOf", "lexical", false),
    ("CN", "/r/DerivedFrom", "lexical", false),
    ("CN", "/r/EtymologicallyDerivedFrom", "lexical", false),
    ("FN", "lexical_unit", "lexical", false),
    ("WN", "lemma", "lexical", false),
    ("WD", "label", "lexical", false),
    // similarity
    ("CN", "/r/Synonym", "similarity", false),
    ("CN", "/r/SimilarTo", "similarity", false),
    ("CN", "/r/DefinedAs", "similarity", false),
    ("FN", "reframing_mapping", "similarity", false),
    ("FN", "metaphor", "similarity", false),
    ("RG", "Synonym", "similarity", false),
    ("WN", "synonym", "similarity", false),
    ("WD", "P460", "similarity", false), // said to be the same as
    // distinctness
    ("CN", "/r/Antonym", "distinctness", false),
    ("CN", "/r/DistinctFrom", "distinctness", false),
    ("RG", "Antonym", "distinctness", false),
    ("WN", "antonym", "distinctness", false),
    ("FN", "excludes", "distinctness", false),
    ("WD", "P1889", "distinctness", false), // different from
    ("WD", "P461", "distinctness", false),  // opposite of
    // taxonomic
    ("CN", "/r/IsA", "taxonomic", false),
    ("CN", "/r/InstanceOf", "taxonomic", false),
    ("CN", "/r/MannerOf", "taxonomic", false),
    ("FN", "perspective_on", "taxonomic", false),
    ("FN", "inheritance", "taxonomic", false),
    ("WN", "hypernym", "taxonomic", false),
    ("WD", "P279", "taxonomic", false), // subclass of
    ("WD", "P31", "taxonomic", false),  // instance of
    ("WD", "description", "taxonomic", false),
    // part-whole
    ("CN", "/r/PartOf", "part-whole", false),
    ("CN", "/r/HasA", "part-whole", false),
    ("CN", "/r/MadeOf", "part-whole", false),
    ("WN", "meronym", "part-whole", false),
    ("WN", "holonym", "part-whole", false),
    ("WD", "P527", "part-whole", false), // has part
    ("WD", "P463", "part-whole", false), // member of
    ("WD", "P186", "part-whole", false), // material used
    // spatial (AtLocation is listed under part-whole as well; one dimension is kept)
    ("CN", "/r/AtLocation", "spatial", false),
    ("CN", "/r/LocatedNear", "spatial", false),
    ("WD", "P276", "spatial", false), // location
    ("WD", "P927", "spatial", false), // anatomical location
    // creation
    ("CN", "/r/CreatedBy", "creation", false),
    ("WD", "P170", "creation", false), // creator
    // utility
    ("CN", "/r/ReceivesAction", "utility", false),
    ("CN", "/r/UsedFor", "utility", false),
    ("CN", "/r/CapableOf", "utility", false),
    ("CN", "/r/NotCapableOf", "utility", true),
    ("FN", "using", "utility", false),
    ("WD", "P1535", "utility", false), // used by
    ("WD", "P366", "utility", false),  // use
    ("WD", "P2283", "utility", false), // uses
    // desire/goal
    ("AT", "at:xIntent", "desire-goal", false),
    ("AT", "at:xWant", "desire-goal", false),
    ("AT", "at:oWant", "desire-goal", false),
    ("CN", "/r/CausesDesire", "desire-goal", false),
    ("CN", "/r/MotivatedByGoal", "desire-goal", false),
    ("CN", "/r/Desires", "desire-goal", false),
    ("CN", "/r/NotDesires", "desire-goal", true),
    ("CN", "/r/ObstructedBy", "desire-goal", false),
    // quality
    ("AT", "at:xAttr", "quality", false),
    ("CN", "/r/HasProperty", "quality", false),
    ("CN", "/r/NotHasProperty", "quality", true),
    ("CN", "/r/SymbolOf", "quality", false),
    ("FN", "frame_element", "quality", false),
    ("WD", "P462", "quality", false),  // color
    ("WD", "P1552", "quality", false), // has quality
    // temporal
    ("AT", "at:xNeed", "temporal", false),
    ("AT", "at:xEffect", "temporal", false),
    ("AT", "at:oEffect", "temporal", false),
    ("AT", "at:xReact", "temporal", false),
    ("AT", "at:oReact", "temporal", false),
    ("CN", "/r/HasFirstSubevent", "temporal", false),
    ("CN", "/r/HasLastSubevent", "temporal", false),
    ("CN", "/r/HasSubevent", "temporal", false),
    ("CN", "/r/HasPrerequisite", "temporal", false),
    ("CN", "/r/Causes", "temporal", false),
    ("CN", "/r/Entails", "temporal", false),
    ("FN", "subframe", "temporal", false),
    ("FN", "precedes", "temporal", false),
    ("FN", "inchoative_of", "temporal", false),
    ("FN", "causative_of", "temporal", false),
    ("WD", "P828", "temporal", false),  // has cause
    ("WD", "P1542", "temporal", false), // has effect
    // relational-other
    ("CN", "/r/RelatedTo", "relational-other", false),
    ("CN", "/r/HasContext", "relational-other", false),
    ("CN", "/r/EtymologicallyRelatedTo", "relational-other", false),
    ("FN", "see_also", "relational-other", false),
    ("FN", "requires", "relational-other", false),
    ("WD", "P425", "relational-other", false),  // field of this occupation
    ("WD", "P180", "relational-other", false),  // depicts
    ("WD", "P1995", "relational-other", false), // health specialty
];

pub fn check_transcription() -> Vec<String> {
    let table = default_mapping();
    let mut failures = Vec::new();
    for &(source, relation, dim, negated) in TRANSCRIPTION {
        let expected: Dimension = dim.parse().unwrap();
        match table.lookup(relation, source) {
            Lookup::Mapped(e) => {
                if e.dimension != expected {
                    failures.push(format!("{source} {relation}: {} != {dim}", e.dimension));
                }
                let want = if negated { Polarity::Negated } else { Polarity::Positive };
                if e.polarity != want {
                    failures.push(format!("{source} {relation}: polarity {:?}", e.polarity));
                }
            }
            other => failures.push(format!("{source} {relation}: {other:?}")),
        }
    }
    for rel in ["/r/dbpedia/genre", "/r/dbpedia/capital", "/r/dbpedia"] {
        if !matches!(table.lookup(rel, "CN"), Lookup::Excluded) {
            failures.push(format!("{rel} is not excluded"));
        }
    }
    failures
}
