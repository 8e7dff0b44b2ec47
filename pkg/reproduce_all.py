#!/usr/bin/env python3
"""
📚 전체 실험 재현 스크립트

configs/ 아래의 모든 실험 설정을 순서대로 실행하여
results/<설정 이름>/ 에 산출물을 생성합니다.
"""

import argparse
import glob
import os
import sys
from typing import List, Optional, Sequence

from config import Config
from main import main as run_experiment
from utils import logger


def reproduce_configs(config_paths: Sequence[str], output_root: str) -> List[str]:
    """설정 파일 목록을 실행하고 실패한 설정 이름 목록 반환"""
    total = len(config_paths)
    logger.info(f"📚 실험 {total}개 재현 시작 → {output_root}")

    success_count = 0
    failed: List[str] = []

    for i, path in enumerate(config_paths):
        name = os.path.splitext(os.path.basename(path))[0]
        logger.info(f"📝 [{i + 1}/{total}] {name} 실행 중...")

        status = run_experiment([path, '--output-dir', os.path.join(output_root, name)])
        if status == 0:
            logger.info(f"✅ {name} 완료!")
            success_count += 1
        else:
            logger.error(f"❌ {name} 실패 (종료 코드 {status})")
            failed.append(name)

    logger.info(f"🎉 재현 완료! 성공: {success_count}/{total}")
    if failed:
        logger.warning(f"⚠️ 실패한 설정: {', '.join(failed)}")
    return failed


def main(argv: Optional[Sequence[str]] = None) -> int:
    """메인 실행 함수"""
    parser = argparse.ArgumentParser(description='configs/ 의 모든 실험 재현')
    parser.add_argument('--configs', type=str, default='configs', help='설정 디렉토리 (기본값: configs)')
    parser.add_argument('--output-root', type=str, default=Config.OUTPUT_DIR,
                        help=f'산출물 루트 디렉토리 (기본값: {Config.OUTPUT_DIR})')
    args = parser.parse_args(argv)

    config_paths = sorted(glob.glob(os.path.join(args.configs, '*.json')))
    if not config_paths:
        logger.error(f"❌ 설정 파일이 없습니다: {args.configs}")
        return 1

    try:
        failed = reproduce_configs(config_paths, args.output_root)
    except KeyboardInterrupt:
        logger.info("👋 사용자에 의해 중단되었습니다.")
        return 1
    return 0 if not failed else 2


if __name__ == "__main__":
    sys.exit(main())
