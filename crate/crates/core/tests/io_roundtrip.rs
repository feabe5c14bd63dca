use clusterwise::io::{read_membership, write_membership};
use clusterwise::MembershipVector;
use proptest::prelude::*;

proptest! {
    #[test]
    fn membership_csv_round_trip(rows in prop::collection::btree_map("[^\u{0}]{1,6}", "[^\u{0}]{1,6}", 1..30)) {
        let mv = MembershipVector::from_pairs(rows).unwrap();
        let mut buf = Vec::new();
        write_membership(&mut buf, &mv).unwrap();
        let back = read_membership(buf.as_slice()).unwrap();
        prop_assert_eq!(back.membership, mv);
        prop_assert_eq!(back.weights, None);
    }
}

#[test]
fn diagnostics_carry_line_numbers() {
    let dup = read_membership(&b"mention_id,cluster_id\na,1\nb,1\na,2\n"[..]).unwrap_err();
    assert!(dup.to_string().contains("line 4"), "{dup}");
    let utf8 = read_membership(&b"mention_id,cluster_id\na,1\nb,\xff\n"[..]).unwrap_err();
    assert!(utf8.to_string().contains("line 3"), "{utf8}");
    let header = read_membership(&b"id,cluster\na,1\n"[..]).unwrap_err();
    assert!(header.to_string().contains("line 1"), "{header}");
}
