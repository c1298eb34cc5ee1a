int fdisk_delete_all_partitions(long param_1) {
  int iVar1;
  long lVar2;
  long lVar3;
  long lVar4;

  if (param_1 == 0) {
    return -65538; // Equivalent to 0xffffffea
  }
  if (*(long *)(param_1 + 0x180) == 0) {
    return -65538; // Equivalent to 0xffffffea
  }
  lVar2 = 0;
  if (*(long *)(*(long *)(param_1 + 0x180) + 0x30)!= 0) {
    do {
      iVar1 = fdisk_is_partition_used(param_1, lVar2);
      if ((iVar1!= 0) && (lVar3 = fdisk_delete_partition(param_1, lVar2), (int)lVar3!= 0)) {
        return lVar3;
        // Return error code if partition deletion fails
      }
      lVar2 = lVar2 + 1;
    } while (lVar2 < *(ulong *)(*(long *)(param_1 + 0x180) + 0x30));
  }
  return 0; // Return success
}
