use intcx::all_targets::{compute_table, Engine};
use intcx::table_io::*;
use intcx::{Error, Limits};

#[test]
fn save_and_load_round_trip() {
    let table = compute_table(50_000, &Limits::default(), Engine::Capped).unwrap();
    let dir = std::env::temp_dir().join(format!("intcx-table-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.bin");
    save(&table, &path).unwrap();
    assert_eq!(std::fs::metadata(&path).unwrap().len() as usize, HEADER_LEN + 50_000);
    let back = load(&path).unwrap();
    assert_eq!(back.values(), table.values());

    let mut bytes = std::fs::read(&path).unwrap();
    bytes.truncate(bytes.len() - 1);
    std::fs::write(&path, &bytes).unwrap();
    assert!(matches!(load(&path), Err(Error::TableFormat(_))));
    std::fs::remove_dir_all(&dir).unwrap();
    assert!(matches!(load(&path), Err(Error::Io { .. })));
}
