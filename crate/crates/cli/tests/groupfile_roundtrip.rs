use cimlab::GroupFile;
use cimlab_core::structured::ModuleSpec;
use cimlab_core::{Perm, StructuredGroup};
use proptest::prelude::*;

fn perm_file() -> impl Strategy<Value = GroupFile> {
    (1usize..8).prop_flat_map(|points| {
        let perm = Just((0..points as u32).collect::<Vec<u32>>())
            .prop_shuffle()
            .prop_map(|images| Perm::from_images(images).unwrap());
        prop::collection::vec(perm, 0..4).prop_map(move |generators| GroupFile::Perm { points, generators })
    })
}

fn abelian_file() -> impl Strategy<Value = GroupFile> {
    prop::collection::vec(1u32..30, 0..4).prop_map(|orders| GroupFile::Abelian { orders })
}

/// Arbitrary, not necessarily valid, structured files: the format must
/// carry whatever the user wrote.
fn structured_file() -> impl Strategy<Value = GroupFile> {
    let module = (2u32..50, 0usize..4, prop::collection::vec(0u32..50, 0..3))
        .prop_map(|(p, delta, action)| ModuleSpec::new(p, delta, action));
    (prop::collection::vec(1u32..12, 0..3), prop::collection::vec(module, 0..4))
        .prop_map(|(h, modules)| GroupFile::Structured(StructuredGroup::new(h, modules)))
}

proptest! {
    #[test]
    fn parse_inverts_emit(file in prop_oneof![perm_file(), abelian_file(), structured_file()]) {
        let text = file.emit();
        prop_assert_eq!(GroupFile::parse(&text).unwrap(), file);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored(file in structured_file(), note in "[ -~]{0,20}") {
        let text: String = file
            .emit()
            .lines()
            .map(|l| format!("{l}   # {note}\n\n"))
            .collect();
        prop_assert_eq!(GroupFile::parse(&text).unwrap(), file);
    }
}
