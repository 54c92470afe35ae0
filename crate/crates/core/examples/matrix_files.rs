//! Write the (2, 2) frame and a certificate to text, read them back, and
//! confirm the hex encoding is bit-exact.

use paving::io::{CertificateFile, Construction, Encoding, MatrixFile};
use paving::{build_stack, find_witness, verify_witness, FrameParams, Partition};

fn main() -> paving::Result<()> {
    let frame = build_stack(FrameParams::new(2, 2)?)?;
    let file = MatrixFile::for_frame(&frame, Construction::Stack, frame.matrix().clone(), Encoding::Hex);
    let text = file.to_text();
    print!("{}", text.lines().take(8).map(|l| format!("{l}\n")).collect::<String>());
    let back = MatrixFile::parse(&text)?;
    println!("... bit-exact: {}", back.matrix == *frame.matrix());

    let p = Partition::new(2, vec![1, 2, 1, 2, 2, 1, 2, 1])?;
    let w = find_witness(&frame, &p, 1)?;
    let cert = CertificateFile::new(&w, &p, "example", verify_witness(&frame, &w).valid, Encoding::Decimal);
    print!("{}", cert.to_text());
    println!("certificate fixed point: {}", CertificateFile::parse(&cert.to_text())?.to_text() == cert.to_text());
    Ok(())
}
