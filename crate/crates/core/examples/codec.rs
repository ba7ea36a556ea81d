//! Index messages, the one-bit flag, and length-prefixed framing on disk.

use vldht::scheme::{read_message, string_decode, string_encode, write_message, BitString};

fn main() -> vldht::Result<()> {
    for m in [1u64, 2, 3, 5, 8, 1000] {
        let s = string_encode(m)?;
        println!("m = {m:>4} -> [{s}] ({} bits)", s.len());
    }
    // the flag has a leading zero, which no index message does
    println!("flag decodes: {:?}", string_decode(&BitString::flag()).is_ok());

    let msgs = vec![BitString::flag(), string_encode(5)?, string_encode(1)?, string_encode(1 << 40)?];
    let mut wire = Vec::new();
    for m in &msgs {
        write_message(&mut wire, m)?;
    }
    println!("{} messages framed into {} bytes", msgs.len(), wire.len());
    let mut r = wire.as_slice();
    while let Some(m) = read_message(&mut r)? {
        match string_decode(&m) {
            Ok(i) => println!("  index {i}"),
            Err(_) => println!("  [{m}] (not an index)"),
        }
    }
    Ok(())
}
