#!/usr/bin/env python3
"""
실험 산출물 결정성 확인 스크립트

같은 설정을 임시 디렉토리 두 곳에 각각 실행하고
산출물 파일의 SHA-256 해시를 비교합니다.
"""

import argparse
import hashlib
import os
import sys
import tempfile
from typing import Dict, List, Optional, Sequence

from main import main as run_experiment
from utils import logger


def artifact_digests(directory: str) -> Dict[str, str]:
    """디렉토리 안 파일 이름 → SHA-256"""
    digests = {}
    for name in sorted(os.listdir(directory)):
        with open(os.path.join(directory, name), 'rb') as f:
            digests[name] = hashlib.sha256(f.read()).hexdigest()
    return digests


def check_determinism(config_path: str) -> List[str]:
    """두 번 실행해 내용이 다른 산출물 이름 목록 반환 (빈 목록이면 결정적)"""
    logger.info(f"🔍 결정성 확인 시작: {config_path}")

    with tempfile.TemporaryDirectory() as first, tempfile.TemporaryDirectory() as second:
        statuses = [run_experiment([config_path, '--output-dir', d]) for d in (first, second)]
        if statuses[0] != statuses[1]:
            logger.warning(f"⚠️ 종료 코드가 다릅니다: {statuses}")
        digests_a, digests_b = artifact_digests(first), artifact_digests(second)

    mismatched = sorted(
        name for name in set(digests_a) | set(digests_b)
        if digests_a.get(name) != digests_b.get(name)
    )

    logger.info("📊 산출물 해시:")
    for name, digest in digests_a.items():
        logger.info(f"   - {name}: {digest[:16]}")

    if mismatched:
        logger.warning(f"⚠️ 실행마다 다른 산출물: {', '.join(mismatched)}")
    else:
        logger.info(f"✅ 산출물 {len(digests_a)}개 모두 동일")
    return mismatched


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(description='실험 산출물이 실행마다 동일한지 확인')
    parser.add_argument('config', type=str, help='실험 설정 JSON 파일')
    args = parser.parse_args(argv)
    return 0 if not check_determinism(args.config) else 1


if __name__ == "__main__":
    sys.exit(main())
